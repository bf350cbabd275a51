#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "chartkit/common.hpp"

namespace chartkit {

/// Search grid over theta, in degrees.
struct AngleGrid {
  double start = 0.0;
  double stop = 180.0;
  double step = 1.0;
};

/// Search grid over rho, in meters.
struct RangeGrid {
  double start = 0.0;
  double stop = 1000.0;
  double step = 1.0;
};

/// floor((stop - start) / step) + 1. Throws ConfigError unless start < stop and step > 0.
std::size_t grid_size(double start, double stop, double step);
std::vector<double> grid_points(double start, double stop, double step);
inline std::vector<double> grid_points(const AngleGrid& g) { return grid_points(g.start, g.stop, g.step); }
inline std::vector<double> grid_points(const RangeGrid& g) { return grid_points(g.start, g.stop, g.step); }

struct Spectrum {
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t peak_index = 0;

  double peak() const { return grid.at(peak_index); }
};

/// Index of the largest value; the smallest index wins ties.
std::size_t argmax(const std::vector<double>& values);

/// Grid abscissa at the spectrum's peak.
double peak_search(const Spectrum& s);

Spectrum make_spectrum(std::vector<double> grid, std::vector<double> values);

/// Precomputed search vectors, one column per grid point.
///
/// When `geometric` is set, column g is (1, z_g, z_g^2, ...) with |z_g| = 1,
/// which lets the Bartlett form be evaluated from the lag sums of R.
struct SearchTable {
  std::vector<double> abscissae;
  CMatrix vectors;  // N x G
  bool geometric = false;

  std::size_t dim() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t size() const { return abscissae.size(); }
};

SearchTable steering_table(const AngleGrid& grid, std::size_t n_rx);
SearchTable subcarrier_table(const RangeGrid& grid, std::size_t n_sub, double delta_f);

inline constexpr double kSpectrumFloor = 1e-12;

/// 1 / max(||N^H a||, 1e-12).
Spectrum music_spectrum(const CMatrix& noise_basis, const SearchTable& table);

/// a^H R a, clamped at zero. Uses lag sums for geometric tables.
Spectrum bartlett_spectrum(const CMatrix& r, const SearchTable& table);

/// a^H R a evaluated as a dense quadratic form for every column.
Spectrum bartlett_spectrum_direct(const CMatrix& r, const SearchTable& table);

/// ||L^H a||^2 with L L^H = R.
Spectrum bartlett_spectrum_cholesky(const CMatrix& chol, const SearchTable& table);

/// 1 / (a^H (R + loading I)^{-1} a) through a Cholesky factor and triangular solve.
Spectrum mvdr_spectrum(const CMatrix& r, const SearchTable& table, double loading);

/// 1 / max(|w^H a|^2, 1e-12) with w = U_n U_n^H e_1.
Spectrum minnorm_spectrum(const CMatrix& noise_basis, const SearchTable& table);

/// CSV rows "abscissa,value".
void write_spectrum_csv(const Spectrum& s, std::ostream& out);

}  // namespace chartkit
