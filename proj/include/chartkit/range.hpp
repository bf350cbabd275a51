#pragma once

#include <span>

#include "chartkit/spectrum.hpp"
#include "chartkit/subspace.hpp"

namespace chartkit {

/// Sum of |h| over every entry. Throws DegenerateInputError when it is zero.
double magnitude_sum(const CMatrix& h);

/// Inverse square root of the summed CSI magnitudes. Proportional to range
/// under rho^-2 path loss; not in meters.
double isq_rho(const CMatrix& h);

/// rho = a * X + b with X = log(sum |h|).
struct LrModel {
  double a = 0.0;
  double b = 0.0;
};

struct RegressionPoint {
  double x = 0.0;    // log(sum |h|)
  double rho = 0.0;  // known range, m
};

double lr_feature(const CMatrix& h);

/// Ordinary least squares of rho on X. Throws FitError with fewer than two
/// points or when every X is the same.
LrModel lr_fit(std::span<const RegressionPoint> training);

/// Prediction clamped below at zero.
double lr_rho(const LrModel& model, const CMatrix& h);

/// Rejects grids that reach the first range alias at c / delta_f.
void check_unambiguous(const RangeGrid& grid, double delta_f);

/// Subcarrier-domain MUSIC. The split must come from a covariance over the
/// subcarrier axis; fewer than two subcarriers raise ApertureError.
Spectrum music_rho(const SubspaceSplit& split, const RangeGrid& grid, double delta_f);

Spectrum bartlett_rho(const CovarianceMatrix& r, const RangeGrid& grid, double delta_f,
                      const CMatrix* chol = nullptr);

}  // namespace chartkit
