#pragma once

// Reference implementations used only by tests. They are written directly
// from the definitions, favouring obviousness over speed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "chartkit/common.hpp"
#include "chartkit/scene.hpp"

namespace oracle {

using chartkit::CMatrix;
using chartkit::Complex;
using chartkit::CVector;
using chartkit::Point2;

inline double sqdist(const Point2& a, const Point2& b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

// rank of j around i: one plus the number of other points strictly closer,
// where equal distances count as closer when their index is smaller.
inline std::int64_t brute_rank(const std::vector<Point2>& p, std::size_t i, std::size_t j) {
  const double dij = sqdist(p[i], p[j]);
  std::int64_t r = 1;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (l == i || l == j) continue;
    const double dil = sqdist(p[i], p[l]);
    if (dil < dij || (dil == dij && l < j)) ++r;
  }
  return r;
}

// Penalty of points that are K-neighbors in `inner` but not in `outer`,
// measured by their rank in `outer`.
inline std::int64_t brute_penalty(const std::vector<Point2>& outer, const std::vector<Point2>& inner,
                                  std::size_t k) {
  const auto kk = static_cast<std::int64_t>(k);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    for (std::size_t j = 0; j < outer.size(); ++j) {
      if (j == i) continue;
      const bool near_inner = brute_rank(inner, i, j) <= kk;
      const std::int64_t r_outer = brute_rank(outer, i, j);
      if (near_inner && r_outer > kk) sum += r_outer - kk;
    }
  }
  return sum;
}

inline double brute_score(std::size_t n, std::size_t k, std::int64_t penalty) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return 1.0 - 2.0 * static_cast<double>(penalty) / (nn * kk * (2.0 * nn - 3.0 * kk - 1.0));
}

inline double brute_trustworthiness(const std::vector<Point2>& truth, const std::vector<Point2>& chart,
                                    std::size_t k) {
  return brute_score(truth.size(), k, brute_penalty(truth, chart, k));
}

inline double brute_continuity(const std::vector<Point2>& truth, const std::vector<Point2>& chart,
                               std::size_t k) {
  return brute_score(truth.size(), k, brute_penalty(chart, truth, k));
}

// Random helpers for property tests; independent of the library's Rng.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  Complex cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

  CMatrix cmatrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

  CMatrix hermitian(Eigen::Index n) {
    const CMatrix m = cmatrix(n, n);
    return 0.5 * (m + m.adjoint());
  }

  // Positive semidefinite, rank r.
  CMatrix psd(Eigen::Index n, Eigen::Index r) {
    const CMatrix g = cmatrix(n, r);
    CMatrix p = g * g.adjoint();
    return 0.5 * (p + p.adjoint());
  }

  CMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(cmatrix(n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
  }

  std::vector<Point2> points(std::size_t n, double scale = 100.0) {
    std::vector<Point2> p(n);
    for (auto& q : p) q = {uniform(0.0, scale), uniform(0.0, scale)};
    return p;
  }
};

}  // namespace oracle
