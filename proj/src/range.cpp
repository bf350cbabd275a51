#include "chartkit/range.hpp"

#include <algorithm>
#include <cmath>

namespace chartkit {

double magnitude_sum(const CMatrix& h) {
  if (h.size() == 0) throw DegenerateInputError("range: empty CSI");
  const double s = h.cwiseAbs().sum();
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DegenerateInputError("range: CSI magnitudes sum to zero or are not finite");
  }
  return s;
}

double isq_rho(const CMatrix& h) { return 1.0 / std::sqrt(magnitude_sum(h)); }

double lr_feature(const CMatrix& h) { return std::log(magnitude_sum(h)); }

LrModel lr_fit(std::span<const RegressionPoint> training) {
  if (training.size() < 2) throw FitError("lr_fit: need at least two training points");
  const auto n = static_cast<double>(training.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : training) {
    mx += p.x;
    my += p.rho;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : training) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.rho - my);
  }
  if (!(sxx > 0.0)) throw FitError("lr_fit: all training features are equal");
  const double a = sxy / sxx;
  return {a, my - a * mx};
}

double lr_rho(const LrModel& model, const CMatrix& h) {
  return std::max(0.0, model.a * lr_feature(h) + model.b);
}

void check_unambiguous(const RangeGrid& grid, double delta_f) {
  if (!(delta_f > 0.0)) throw ConfigError("range: subcarrier spacing must be positive");
  const double period = kSpeedOfLight / delta_f;
  if (grid.stop >= period) {
    throw ConfigError("range grid stop " + std::to_string(grid.stop) +
                      " m reaches the alias period " + std::to_string(period) + " m");
  }
}

Spectrum music_rho(const SubspaceSplit& split, const RangeGrid& grid, double delta_f) {
  const auto n = static_cast<std::size_t>(split.noise_basis.rows());
  if (n < 2) throw ApertureError("music_rho: needs at least two subcarriers");
  check_unambiguous(grid, delta_f);
  return music_spectrum(split.noise_basis, subcarrier_table(grid, n, delta_f));
}

Spectrum bartlett_rho(const CovarianceMatrix& r, const RangeGrid& grid, double delta_f,
                      const CMatrix* chol) {
  if (r.dim() < 2) throw ApertureError("bartlett_rho: needs at least two subcarriers");
  check_unambiguous(grid, delta_f);
  const SearchTable table = subcarrier_table(grid, r.dim(), delta_f);
  if (chol != nullptr) return bartlett_spectrum_cholesky(*chol, table);
  return bartlett_spectrum(r.entries, table);
}

}  // namespace chartkit
