#include "chartkit/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chartkit {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// x * y without the NaN/Inf recovery path of operator* on std::complex.
inline Complex cmul(Complex x, Complex y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

// One complex Jacobi rotation zeroing a(p, q).
//
// With a(p, q) = |a_pq| e^{i alpha}, U = diag(1, e^{-i alpha}) * G where G is
// the real rotation that diagonalizes [[a_pp, |a_pq|], [|a_pq|, a_qq]]. The
// update is A <- U^H A U and V <- V U. Only columns p and q are computed; the
// rows follow from Hermitian symmetry.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;  // e^{i alpha}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex sp = s * std::conj(phase);  // s e^{-i alpha}
  const Complex cp = c * std::conj(phase);  // c e^{-i alpha}

  const Eigen::Index n = a.rows();
  Complex* colp = a.col(p).data();
  Complex* colq = a.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = colp[k];
    const Complex akq = colq[k];
    colp[k] = c * akp - cmul(sp, akq);
    colq[k] = s * akp + cmul(cp, akq);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    a(p, k) = std::conj(colp[k]);
    a(q, k) = std::conj(colq[k]);
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  Complex* vp = v.col(p).data();
  Complex* vq = v.col(q).data();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = vp[k];
    const Complex vkq = vq[k];
    vp[k] = c * vkp - cmul(sp, vkq);
    vq[k] = s * vkp + cmul(cp, vkq);
  }
}

}  // namespace

CovarianceMatrix covariance(std::span<const CVector> snapshots, SnapshotAxis axis) {
  if (snapshots.empty()) {
    throw DomainError("covariance: empty snapshot list");
  }
  const Eigen::Index n = snapshots.front().size();
  if (n == 0) throw DomainError("covariance: zero-length snapshot");
  CMatrix r = CMatrix::Zero(n, n);
  for (const CVector& h : snapshots) {
    if (h.size() != n) throw DomainError("covariance: snapshots differ in length");
    r.noalias() += h * h.adjoint();
  }
  r /= static_cast<double>(snapshots.size());
  CMatrix hermitian = 0.5 * (r + r.adjoint());
  return {std::move(hermitian), axis, snapshots.size()};
}

CovarianceMatrix csi_covariance(const CMatrix& csi, SnapshotAxis axis) {
  if (csi.size() == 0) throw DomainError("csi_covariance: empty CSI matrix");
  CMatrix r;
  std::size_t m = 0;
  if (axis == SnapshotAxis::Antennas) {
    // Rows are snapshots: R_ij = (1/M) sum_m H(m,i) conj(H(m,j)).
    m = static_cast<std::size_t>(csi.rows());
    r.noalias() = csi.transpose() * csi.conjugate();
  } else {
    m = static_cast<std::size_t>(csi.cols());
    r.noalias() = csi * csi.adjoint();
  }
  r /= static_cast<double>(m);
  CMatrix hermitian = 0.5 * (r + r.adjoint());
  return {std::move(hermitian), axis, m};
}

EigenDecomposition hermitian_eig(const CMatrix& r) {
  const Eigen::Index n = r.rows();
  if (n == 0 || r.cols() != n) throw DomainError("hermitian_eig: matrix must be square and non-empty");
  if (!r.allFinite()) throw DomainError("hermitian_eig: non-finite entries");
  const double norm = r.norm();
  if ((r - r.adjoint()).norm() > kHermitianTolerance * std::max(norm, 1e-300)) {
    throw DomainError("hermitian_eig: matrix is not Hermitian");
  }

  CMatrix a = r;
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  CMatrix v = CMatrix::Identity(n, n);
  const double tol = kOffDiagonalTolerance * norm;

  int sweep = 0;
  for (; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) break;
    if (sweep == kMaxSweeps) {
      throw ConvergenceError("hermitian_eig: no convergence after 100 sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    CVector col = v.col(src);
    Eigen::Index lead = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(col(i));
      if (m > best * (1.0 + 1e-12)) {
        best = m;
        lead = i;
      }
    }
    if (best > 0.0) col *= std::conj(col(lead)) / best;
    col(lead) = best;
    out.eigenvectors.col(k) = col;
  }
  return out;
}

SubspaceSplit split_subspaces(const EigenDecomposition& eig, const SubspacePolicy& policy) {
  const Eigen::Index n = eig.eigenvalues.size();
  std::size_t k = 0;
  if (const auto* fixed = std::get_if<FixedK>(&policy)) {
    if (fixed->k < 1 || static_cast<Eigen::Index>(fixed->k) >= n) {
      throw DomainError("split_subspaces: FixedK requires 1 <= K < N");
    }
    k = fixed->k;
  } else {
    const double tau = std::get<RatioThreshold>(policy).tau;
    if (!(tau >= 0.0)) throw DomainError("split_subspaces: threshold must be non-negative");
    const double lmax = n > 0 ? eig.eigenvalues(0) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (eig.eigenvalues(i) > tau * lmax) ++k;
    }
    if (static_cast<Eigen::Index>(k) >= n) {
      throw DegenerateInputError("split_subspaces: threshold leaves an empty noise subspace");
    }
  }
  const auto ks = static_cast<Eigen::Index>(k);
  return {k, eig.eigenvectors.leftCols(ks), eig.eigenvectors.rightCols(n - ks)};
}

CMatrix cholesky(const CMatrix& r, double loading) {
  const Eigen::Index n = r.rows();
  if (n == 0 || r.cols() != n) throw DomainError("cholesky: matrix must be square and non-empty");
  CMatrix l = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = r(j, j).real() + loading;
    for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
    if (!(pivot > 0.0)) {
      throw NotPositiveDefiniteError("cholesky: non-positive pivot at column " + std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex sum = r(i, j);
      for (Eigen::Index k = 0; k < j; ++k) sum -= l(i, k) * std::conj(l(j, k));
      l(i, j) = sum / d;
    }
  }
  return l;
}

double default_loading(const CovarianceMatrix& r, double factor) {
  if (r.dim() == 0) return 0.0;
  return factor * r.trace() / static_cast<double>(r.dim());
}

}  // namespace chartkit
