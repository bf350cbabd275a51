#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "chartkit/common.hpp"

namespace chartkit {

enum class SnapshotAxis {
  Antennas,     // snapshots are CSI rows, vectors over antennas (theta search)
  Subcarriers,  // snapshots are CSI columns, vectors over subcarriers (rho search)
};

struct CovarianceMatrix {
  CMatrix entries;
  SnapshotAxis axis = SnapshotAxis::Antennas;
  std::size_t snapshot_count = 0;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  double trace() const { return entries.diagonal().real().sum(); }
};

/// R = (1/M) sum_m h_m h_m^H. The result is exactly Hermitian.
CovarianceMatrix covariance(std::span<const CVector> snapshots,
                            SnapshotAxis axis = SnapshotAxis::Antennas);

/// Covariance of a CSI matrix (n_sub x n_rx) along the requested axis.
CovarianceMatrix csi_covariance(const CMatrix& csi, SnapshotAxis axis);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  CMatrix eigenvectors;         // column i pairs with eigenvalues(i)
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 * ||R||_F
/// and throws ConvergenceError if 100 sweeps are not enough. Each eigenvector
/// is rotated so its largest-magnitude component is real and positive.
EigenDecomposition hermitian_eig(const CMatrix& r);
inline EigenDecomposition hermitian_eig(const CovarianceMatrix& r) { return hermitian_eig(r.entries); }

struct FixedK {
  std::size_t k = 1;
};
struct RatioThreshold {
  double tau = 0.01;
};
using SubspacePolicy = std::variant<FixedK, RatioThreshold>;

struct SubspaceSplit {
  std::size_t signal_dim = 0;
  CMatrix signal_basis;  // N x K
  CMatrix noise_basis;   // N x (N - K)
};

SubspaceSplit split_subspaces(const EigenDecomposition& eig, const SubspacePolicy& policy = FixedK{1});

/// Lower-triangular L with L L^H = R + loading * I.
/// Throws NotPositiveDefiniteError when a pivot is not strictly positive.
CMatrix cholesky(const CMatrix& r, double loading = 0.0);
inline CMatrix cholesky(const CovarianceMatrix& r, double loading = 0.0) {
  return cholesky(r.entries, loading);
}

/// Default diagonal loading: 1e-9 * trace(R) / N.
double default_loading(const CovarianceMatrix& r, double factor = 1e-9);

}  // namespace chartkit
