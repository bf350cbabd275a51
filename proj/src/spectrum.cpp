#include "chartkit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "chartkit/subspace.hpp"

namespace chartkit {

namespace {

void check_dim(const CMatrix& m, const SearchTable& table, const char* who) {
  if (m.rows() != static_cast<Eigen::Index>(table.dim())) {
    throw DomainError(std::string(who) + ": basis has " + std::to_string(m.rows()) +
                      " rows but search vectors have length " + std::to_string(table.dim()));
  }
  if (table.size() == 0) throw DomainError(std::string(who) + ": empty search table");
}

void check_square(const CMatrix& r, const SearchTable& table, const char* who) {
  if (r.rows() != r.cols()) throw DomainError(std::string(who) + ": matrix must be square");
  check_dim(r, table, who);
}

// Unit-modulus geometric columns: entry k of column g is exp(j * phase[g] * k).
CMatrix geometric_columns(const std::vector<double>& phase_step, std::size_t n) {
  CMatrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(phase_step.size()));
  for (std::size_t g = 0; g < phase_step.size(); ++g) {
    for (std::size_t k = 0; k < n; ++k) {
      v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(g)) =
          std::polar(1.0, phase_step[g] * static_cast<double>(k));
    }
  }
  return v;
}

std::vector<double> to_vector(const Eigen::ArrayXd& a) {
  return {a.data(), a.data() + a.size()};
}

}  // namespace

std::size_t grid_size(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw ConfigError("grid: bounds and step must be finite");
  }
  if (!(start < stop)) throw ConfigError("grid: start must be below stop");
  if (!(step > 0.0)) throw ConfigError("grid: step must be positive");
  return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

std::vector<double> grid_points(double start, double stop, double step) {
  const std::size_t n = grid_size(start, stop, step);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + static_cast<double>(i) * step;
  return g;
}

std::size_t argmax(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("argmax: empty spectrum");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double peak_search(const Spectrum& s) { return s.grid.at(argmax(s.values)); }

Spectrum make_spectrum(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size()) throw DomainError("spectrum: grid and values differ in length");
  Spectrum s{std::move(grid), std::move(values), 0};
  s.peak_index = argmax(s.values);
  return s;
}

SearchTable steering_table(const AngleGrid& grid, std::size_t n_rx) {
  if (grid.start < 0.0 || grid.stop > 180.0) {
    throw ConfigError("angle grid must lie within [0, 180] degrees");
  }
  if (n_rx < 1) throw DomainError("steering_table: n_rx must be >= 1");
  SearchTable t;
  t.abscissae = grid_points(grid);
  std::vector<double> step(t.abscissae.size());
  for (std::size_t g = 0; g < step.size(); ++g) {
    step[g] = std::numbers::pi * std::cos(t.abscissae[g] * std::numbers::pi / 180.0);
  }
  t.vectors = geometric_columns(step, n_rx);
  t.geometric = true;
  return t;
}

SearchTable subcarrier_table(const RangeGrid& grid, std::size_t n_sub, double delta_f) {
  if (grid.start < 0.0) throw ConfigError("range grid must start at or above 0 m");
  if (n_sub < 1) throw DomainError("subcarrier_table: n_sub must be >= 1");
  if (!(delta_f > 0.0)) throw DomainError("subcarrier_table: delta_f must be positive");
  SearchTable t;
  t.abscissae = grid_points(grid);
  std::vector<double> step(t.abscissae.size());
  for (std::size_t g = 0; g < step.size(); ++g) {
    step[g] = -2.0 * std::numbers::pi * t.abscissae[g] * delta_f / kSpeedOfLight;
  }
  t.vectors = geometric_columns(step, n_sub);
  t.geometric = true;
  return t;
}

Spectrum music_spectrum(const CMatrix& noise_basis, const SearchTable& table) {
  check_dim(noise_basis, table, "music");
  if (noise_basis.cols() == 0) throw DomainError("music: empty noise subspace");
  const CMatrix proj = noise_basis.adjoint() * table.vectors;
  const Eigen::ArrayXd norms = proj.colwise().norm().transpose().array();
  return make_spectrum(table.abscissae, to_vector(1.0 / norms.max(kSpectrumFloor)));
}

Spectrum bartlett_spectrum(const CMatrix& r, const SearchTable& table) {
  if (!table.geometric) return bartlett_spectrum_direct(r, table);
  check_square(r, table, "bartlett");
  // a^H R a = s_0 + 2 Re sum_{d>0} s_d z^d, with s_d the sum of the d-th superdiagonal.
  const Eigen::Index n = r.rows();
  CVector lag = CVector::Zero(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    lag(d) = r.diagonal(d).sum();
  }
  Eigen::ArrayXd values = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(table.size()),
                                                   lag(0).real());
  if (n > 1) {
    const Eigen::RowVectorXcd tail = lag.tail(n - 1).transpose() * table.vectors.bottomRows(n - 1);
    values += 2.0 * tail.real().transpose().array();
  }
  return make_spectrum(table.abscissae, to_vector(values.max(0.0)));
}

Spectrum bartlett_spectrum_direct(const CMatrix& r, const SearchTable& table) {
  check_square(r, table, "bartlett");
  const CMatrix ra = r * table.vectors;
  const Eigen::ArrayXd values =
      (table.vectors.conjugate().cwiseProduct(ra)).colwise().sum().real().transpose().array();
  return make_spectrum(table.abscissae, to_vector(values.max(0.0)));
}

Spectrum bartlett_spectrum_cholesky(const CMatrix& chol, const SearchTable& table) {
  check_square(chol, table, "bartlett");
  const CMatrix y = chol.triangularView<Eigen::Lower>().adjoint() * table.vectors;
  return make_spectrum(table.abscissae, to_vector(y.colwise().squaredNorm().transpose().array()));
}

Spectrum mvdr_spectrum(const CMatrix& r, const SearchTable& table, double loading) {
  check_square(r, table, "mvdr");
  if (!(loading >= 0.0)) throw DomainError("mvdr: loading must be non-negative");
  CMatrix l;
  try {
    l = cholesky(r, loading);
  } catch (const NotPositiveDefiniteError& e) {
    throw NumericalError(std::string("mvdr: factorization failed after loading (") + e.what() + ")");
  }
  const CMatrix x = l.triangularView<Eigen::Lower>().solve(table.vectors);
  const Eigen::ArrayXd denom = x.colwise().squaredNorm().transpose().array();
  if (!denom.allFinite() || (denom <= 0.0).any()) {
    throw NumericalError("mvdr: non-finite spectrum");
  }
  return make_spectrum(table.abscissae, to_vector(1.0 / denom));
}

Spectrum minnorm_spectrum(const CMatrix& noise_basis, const SearchTable& table) {
  check_dim(noise_basis, table, "minnorm");
  if (noise_basis.cols() == 0) throw DomainError("minnorm: empty noise subspace");
  const CVector w = noise_basis * noise_basis.row(0).adjoint();
  if (w.norm() < kSpectrumFloor) {
    throw DegenerateInputError("minnorm: e1 lies in the signal subspace");
  }
  const Eigen::ArrayXd power = (w.adjoint() * table.vectors).cwiseAbs2().transpose().array();
  return make_spectrum(table.abscissae, to_vector(1.0 / power.max(kSpectrumFloor)));
}

void write_spectrum_csv(const Spectrum& s, std::ostream& out) {
  out << "abscissa,value\n";
  char line[96];
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.6f,%.12g\n", s.grid[i], s.values[i]);
    out << line;
  }
}

}  // namespace chartkit
