#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "support/oracles.hpp"
#include "chartkit/channel.hpp"
#include "chartkit/subspace.hpp"

using namespace chartkit;

namespace {

std::vector<CVector> rows_of(const CMatrix& m) {
  std::vector<CVector> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(m.row(r).transpose());
  return out;
}

CMatrix noiseless_los(double theta, double rho, std::size_t n_rx = 32, std::size_t n_sub = 32) {
  ChannelParams p;
  p.n_rx = n_rx;
  p.n_sub = n_sub;
  return los_response({theta, rho}, p, 0.3, 1.0);
}

}  // namespace

TEST_CASE("covariance of one snapshot is its outer product") {
  oracle::Gen g(1);
  const CVector h = g.cmatrix(5, 1).col(0);
  const std::vector<CVector> snaps{h};
  const CovarianceMatrix r = covariance(snaps);
  CHECK((r.entries - h * h.adjoint()).norm() < 1e-14);
  CHECK(r.snapshot_count == 1);
  const auto eig = hermitian_eig(r);
  CHECK(eig.eigenvalues(1) < 1e-12 * eig.eigenvalues(0));
}

TEST_CASE("covariance of the standard basis is I / N") {
  const int n = 6;
  std::vector<CVector> snaps;
  for (int i = 0; i < n; ++i) snaps.push_back(CVector::Unit(n, i));
  const CovarianceMatrix r = covariance(snaps);
  CHECK((r.entries - CMatrix::Identity(n, n) / n).norm() < 1e-15);
}

TEST_CASE("covariance errors") {
  std::vector<CVector> none;
  CHECK_THROWS_AS(covariance(none), DomainError);
  std::vector<CVector> ragged{CVector::Ones(3), CVector::Ones(4)};
  CHECK_THROWS_AS(covariance(ragged), DomainError);
}

TEST_CASE("noiseless LOS rows give a single nonzero eigenvalue") {
  const CMatrix h = noiseless_los(60.0, 300.0);
  const CovarianceMatrix r = csi_covariance(h, SnapshotAxis::Antennas);
  const auto eig = hermitian_eig(r);
  CHECK(eig.eigenvalues(0) > 0.0);
  CHECK(std::abs(eig.eigenvalues(1)) < 1e-10 * eig.eigenvalues(0));
}

TEST_CASE("csi_covariance matches explicit snapshot lists on both axes") {
  oracle::Gen g(2);
  const CMatrix h = g.cmatrix(7, 5);
  const CovarianceMatrix ra = csi_covariance(h, SnapshotAxis::Antennas);
  const CovarianceMatrix ref_a = covariance(rows_of(h), SnapshotAxis::Antennas);
  CHECK(ra.dim() == 5);
  CHECK((ra.entries - ref_a.entries).norm() < 1e-13);

  std::vector<CVector> cols;
  for (Eigen::Index c = 0; c < h.cols(); ++c) cols.push_back(h.col(c));
  const CovarianceMatrix rs = csi_covariance(h, SnapshotAxis::Subcarriers);
  CHECK(rs.dim() == 7);
  CHECK((rs.entries - covariance(cols).entries).norm() < 1e-13);
}

TEST_CASE("trace equals the mean snapshot energy and R is exactly Hermitian") {
  oracle::Gen g(3);
  const CMatrix h = g.cmatrix(9, 8);
  const auto snaps = rows_of(h);
  const CovarianceMatrix r = covariance(snaps);
  double energy = 0.0;
  for (const auto& s : snaps) energy += s.squaredNorm();
  CHECK(r.trace() == doctest::Approx(energy / 9.0).epsilon(1e-14));
  CHECK(r.entries == r.entries.adjoint());
}

TEST_CASE("eig of diag(3, 1)") {
  CMatrix r = CMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  r(1, 1) = 3.0;
  const auto eig = hermitian_eig(r);
  CHECK(eig.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  CHECK((eig.eigenvectors.col(0) - CVector::Unit(2, 1)).norm() < 1e-15);
  CHECK((eig.eigenvectors.col(1) - CVector::Unit(2, 0)).norm() < 1e-15);
}

TEST_CASE("eig of a rank-one matrix recovers the generating vector") {
  oracle::Gen g(4);
  CVector h = g.cmatrix(6, 1).col(0);
  h *= 2.0 / h.norm();
  const auto eig = hermitian_eig(CMatrix(h * h.adjoint()));
  CHECK(eig.eigenvalues(0) == doctest::Approx(4.0).epsilon(1e-12));
  const Complex overlap = eig.eigenvectors.col(0).dot(h / 2.0);
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig reconstructs random Hermitian matrices and agrees with a library solver") {
  oracle::Gen g(5);
  for (int n : {1, 2, 3, 8, 16, 32}) {
    const CMatrix r = g.hermitian(n);
    const auto eig = hermitian_eig(r);
    const CMatrix& v = eig.eigenvectors;
    const CMatrix recon = v * eig.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    CHECK((recon - r).norm() / r.norm() < 1e-10);
    CHECK((v.adjoint() * v - CMatrix::Identity(n, n)).norm() < 1e-10);

    Eigen::SelfAdjointEigenSolver<CMatrix> ref(r);
    Eigen::VectorXd expected = ref.eigenvalues().reverse();
    CHECK((eig.eigenvalues - expected).norm() < 1e-10 * r.norm());
    CHECK(eig.eigenvalues.sum() == doctest::Approx(r.trace().real()).epsilon(1e-10));
    for (int i = 1; i < n; ++i) CHECK(eig.eigenvalues(i - 1) >= eig.eigenvalues(i));
    for (int i = 0; i < n; ++i) {
      CHECK((r * v.col(i) - eig.eigenvalues(i) * v.col(i)).norm() <
            1e-8 * eig.eigenvalues.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("eigenvectors carry the phase convention") {
  oracle::Gen g(6);
  const auto eig = hermitian_eig(g.psd(10, 10));
  for (int i = 0; i < 10; ++i) {
    const CVector v = eig.eigenvectors.col(i);
    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    CHECK(v(lead).imag() == 0.0);
    CHECK(v(lead).real() > 0.0);
  }
}

TEST_CASE("eig on PSD input keeps eigenvalues non-negative to tolerance") {
  oracle::Gen g(7);
  const CMatrix r = g.psd(12, 3);
  const auto eig = hermitian_eig(r);
  for (int i = 0; i < 12; ++i) CHECK(eig.eigenvalues(i) >= -1e-10 * eig.eigenvalues(0));
}

TEST_CASE("eig input checks") {
  CMatrix r = CMatrix::Identity(3, 3);
  r(0, 1) = Complex(0.5, 0.0);
  CHECK_THROWS_AS(hermitian_eig(r), DomainError);
  CHECK_THROWS_AS(hermitian_eig(CMatrix(2, 3)), DomainError);
  CMatrix z = CMatrix::Zero(4, 4);
  const auto eig = hermitian_eig(z);
  CHECK(eig.eigenvalues.isZero());
  CMatrix nan = CMatrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(hermitian_eig(nan), DomainError);
}

namespace {

EigenDecomposition diag_eig(std::vector<double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  EigenDecomposition e;
  e.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), n);
  e.eigenvectors = CMatrix::Identity(n, n);
  return e;
}

}  // namespace

TEST_CASE("split policies on a clear eigenvalue gap") {
  const auto e = diag_eig({10.0, 0.01, 0.01, 0.01});
  const auto fixed = split_subspaces(e, FixedK{1});
  CHECK(fixed.signal_dim == 1);
  CHECK(fixed.noise_basis.cols() == 3);
  const auto ratio = split_subspaces(e, RatioThreshold{0.01});
  CHECK(ratio.signal_dim == 1);
  CHECK(ratio.noise_basis == fixed.noise_basis);
  CHECK(split_subspaces(e).signal_dim == 1);
}

TEST_CASE("split errors") {
  const auto e = diag_eig({4.0, 3.0, 2.0});
  CHECK_THROWS_AS(split_subspaces(e, FixedK{0}), DomainError);
  CHECK_THROWS_AS(split_subspaces(e, FixedK{3}), DomainError);
  CHECK_THROWS_AS(split_subspaces(e, RatioThreshold{0.1}), DegenerateInputError);
  CHECK(split_subspaces(e, RatioThreshold{0.9}).signal_dim == 1);
}

TEST_CASE("split bases are complementary and orthogonal") {
  oracle::Gen g(8);
  const auto eig = hermitian_eig(g.psd(9, 9));
  for (std::size_t k = 1; k < 9; ++k) {
    const auto s = split_subspaces(eig, FixedK{k});
    CHECK(static_cast<std::size_t>(s.signal_basis.cols() + s.noise_basis.cols()) == 9);
    CHECK((s.signal_basis.adjoint() * s.noise_basis).norm() < 1e-10);
    CHECK((s.noise_basis.adjoint() * s.noise_basis - CMatrix::Identity(9 - k, 9 - k)).norm() < 1e-10);
  }
}

TEST_CASE("noise subspace of noiseless LOS is orthogonal to the true steering vector") {
  const CMatrix h = noiseless_los(60.0, 400.0);
  const auto split = split_subspaces(hermitian_eig(csi_covariance(h, SnapshotAxis::Antennas)));
  const CVector a = steering_vector(60.0, 32);
  CHECK((split.noise_basis.adjoint() * a).norm() < 1e-8 * a.norm());
}

TEST_CASE("cholesky small cases") {
  CHECK((cholesky(CMatrix::Identity(4, 4)) - CMatrix::Identity(4, 4)).norm() == 0.0);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const CMatrix l = cholesky(d);
  CHECK(l(0, 0) == Complex(2.0, 0.0));
  CHECK(l(1, 1) == Complex(3.0, 0.0));
  CHECK(l(1, 0) == Complex(0.0, 0.0));
}

TEST_CASE("cholesky reconstructs loaded PSD matrices") {
  oracle::Gen g(9);
  for (int rank : {1, 4, 16}) {
    const CMatrix r = g.psd(16, rank);
    const double lmax = hermitian_eig(r).eigenvalues(0);
    const double loading = 1e-6 * lmax;
    const CMatrix l = cholesky(r, loading);
    const CMatrix target = r + loading * CMatrix::Identity(16, 16);
    CHECK((l * l.adjoint() - target).norm() / target.norm() < 1e-10);
    CHECK(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero());
  }
}

TEST_CASE("cholesky rejects matrices that are not positive definite") {
  oracle::Gen g(10);
  CHECK_THROWS_AS(cholesky(g.psd(6, 2)), NotPositiveDefiniteError);
  CMatrix neg = -CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(cholesky(neg), NotPositiveDefiniteError);
}

TEST_CASE("default loading scales with trace / N") {
  CovarianceMatrix r{CMatrix::Identity(4, 4) * 2.0, SnapshotAxis::Antennas, 1};
  CHECK(default_loading(r) == doctest::Approx(2e-9));
  CHECK(default_loading(r, 0.5) == doctest::Approx(1.0));
}
