#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chartkit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

// Every failure raised by the toolkit derives from Error so callers can catch
// one type and still report the category through what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-facing configuration (scene, channel, grids, experiment).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input that is well-formed but carries no usable information
// (all-zero CSI, empty noise subspace, vanishing Min-Norm weight).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

// Floating-point failure inside an estimator (e.g. factorization after loading).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Subcarrier-domain estimators need at least two subcarriers.
class ApertureError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

}  // namespace chartkit
