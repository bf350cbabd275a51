#include "chartkit/aoa.hpp"

namespace chartkit {

namespace {

std::size_t basis_dim(const SubspaceSplit& split) {
  return static_cast<std::size_t>(split.noise_basis.rows());
}

}  // namespace

Spectrum music_theta(const SubspaceSplit& split, const AngleGrid& grid) {
  return music_spectrum(split.noise_basis, steering_table(grid, basis_dim(split)));
}

Spectrum bartlett_theta(const CovarianceMatrix& r, const AngleGrid& grid, const CMatrix* chol) {
  const SearchTable table = steering_table(grid, r.dim());
  if (chol != nullptr) return bartlett_spectrum_cholesky(*chol, table);
  return bartlett_spectrum(r.entries, table);
}

Spectrum mvdr_theta(const CovarianceMatrix& r, const AngleGrid& grid, double loading) {
  return mvdr_spectrum(r.entries, steering_table(grid, r.dim()), loading);
}

Spectrum minnorm_theta(const SubspaceSplit& split, const AngleGrid& grid) {
  return minnorm_spectrum(split.noise_basis, steering_table(grid, basis_dim(split)));
}

}  // namespace chartkit
