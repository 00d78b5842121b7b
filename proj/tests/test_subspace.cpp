#include "dabench/subspace.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace dabench;
using testutil::thrown_kind;

namespace {

// Anisotropic cloud so the principal order is unambiguous.
Eigen::MatrixXd scaled_cloud(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Eigen::MatrixXd X = oracles::gaussian_matrix(n, d, seed);
  for (Eigen::Index j = 0; j < d; ++j)
    X.col(j) *= 5.0 / static_cast<double>(j + 1);
  X.rowwise() += Eigen::RowVectorXd::Constant(d, 3.0);
  return X;
}

Eigen::MatrixXd projector(const Eigen::MatrixXd& B) {
  return B * B.transpose();
}

linalg::Subspace as_subspace(Eigen::MatrixXd basis) {
  linalg::Subspace s;
  s.k = static_cast<int>(basis.cols());
  s.mean = Eigen::VectorXd::Zero(basis.rows());
  s.basis = std::move(basis);
  return s;
}

}  // namespace

TEST_CASE("pca agrees with the covariance eigendecomposition") {
  const Eigen::MatrixXd X = scaled_cloud(40, 6, 2024);
  const linalg::Subspace s = linalg::pca(X, 3);

  const Eigen::VectorXd mean = X.colwise().mean();
  CHECK((s.mean - mean).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::MatrixXd Xc = X.rowwise() - mean.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Xc.transpose() * Xc);
  Eigen::MatrixXd top(6, 3);  // eigenvalues ascend, so take the tail reversed
  for (int j = 0; j < 3; ++j) top.col(j) = eig.eigenvectors().col(5 - j);

  CHECK((projector(s.basis) - projector(top)).cwiseAbs().maxCoeff() <= 1e-8);

  // Orthonormal columns, canonical signs, centered projections.
  CHECK((s.basis.transpose() * s.basis - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs().maxCoeff() <= 1e-12);
  for (int j = 0; j < 3; ++j) {
    Eigen::Index imax = 0;
    s.basis.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(s.basis(imax, j) > 0.0);
  }
  CHECK(s.project(X).colwise().mean().cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pca bounds k by both the sample count and the effective rank") {
  const Eigen::MatrixXd X = scaled_cloud(5, 8, 11);
  CHECK(thrown_kind([&] { linalg::pca(X, 5); }) == "k-out-of-range");
  CHECK(thrown_kind([&] { linalg::pca(X, 0); }) == "k-out-of-range");
  CHECK(thrown_kind([&] { linalg::pca(Eigen::MatrixXd::Zero(1, 4), 1); }) ==
        "k-out-of-range");
  CHECK(linalg::pca_max_k(X) == 4);

  // Rank-2 cloud: three distinct rows, one duplicated many times.
  Eigen::MatrixXd low(6, 4);
  low << 1, 0, 0, 0,
      0, 1, 0, 0,
      1, 1, 0, 0,
      1, 0, 0, 0,
      0, 1, 0, 0,
      1, 1, 0, 0;
  CHECK(linalg::pca_max_k(low) == 2);
  CHECK(thrown_kind([&] { linalg::pca(low, 3); }) == "rank-deficient");
  CHECK(linalg::pca(low, 2).k == 2);

  CHECK(linalg::pca_max_k(Eigen::MatrixXd::Zero(1, 4)) == 0);
  CHECK(linalg::pca_max_k(Eigen::MatrixXd::Zero(10, 4)) == 0);
}

TEST_CASE("alignment map is the basis cross-product") {
  const linalg::Subspace a = as_subspace(oracles::random_basis(7, 3, 1));
  const linalg::Subspace b = as_subspace(oracles::random_basis(7, 3, 2));
  CHECK(linalg::align_subspaces(a, b).M == a.basis.transpose() * b.basis);

  const linalg::Subspace c = as_subspace(oracles::random_basis(6, 3, 3));
  CHECK(thrown_kind([&] { linalg::align_subspaces(a, c); }) ==
        "dimension-mismatch");
}

TEST_CASE("principal angles match a planted geometry and an eigen cross-check") {
  // span{e1,e2} vs span{cos(phi) e1 + sin(phi) e3, e2}: angles {0, phi}.
  const double phi = 0.7;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 1.0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B(0, 0) = std::cos(phi);
  B(2, 0) = std::sin(phi);
  B(1, 1) = 1.0;
  const Eigen::VectorXd theta =
      linalg::principal_angles(as_subspace(A), as_subspace(B));
  CHECK(theta.size() == 2);
  CHECK(std::abs(theta(0) - 0.0) <= 1e-12);
  CHECK(std::abs(theta(1) - phi) <= 1e-12);

  // Random pair: angles from the eigenvalues of M^T M, sorted to match.
  const linalg::Subspace s = as_subspace(oracles::random_basis(9, 3, 31));
  const linalg::Subspace t = as_subspace(oracles::random_basis(9, 3, 32));
  const Eigen::VectorXd got = linalg::principal_angles(s, t);
  const Eigen::MatrixXd M = s.basis.transpose() * t.basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * M);
  for (int i = 0; i < 3; ++i) {
    const double cos_i =
        std::sqrt(std::clamp(eig.eigenvalues()(2 - i), 0.0, 1.0));
    CHECK(std::abs(got(i) - std::acos(cos_i)) <= 1e-10);
  }

  // Angles depend on the spans only, not the basis choice within them.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(oracles::gaussian_matrix(3, 3, 33));
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::VectorXd rotated =
      linalg::principal_angles(as_subspace(s.basis * Q), t);
  CHECK((rotated - got).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("gfk closed form equals the quadrature of its geodesic") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const linalg::Subspace s = as_subspace(oracles::random_basis(8, 2, seed));
    const linalg::Subspace t =
        as_subspace(oracles::random_basis(8, 2, seed + 100));
    const linalg::GfkKernel kernel = linalg::gfk_kernel(s, t);
    const Eigen::MatrixXd ref = oracles::gfk_quadrature(s, t, 10000);
    CHECK((kernel.G - ref).cwiseAbs().maxCoeff() <= 1e-6);

    // The kernel reports the same angles the standalone routine computes.
    const Eigen::VectorXd theta = linalg::principal_angles(s, t);
    CHECK((kernel.theta - theta).cwiseAbs().maxCoeff() <= 1e-9);

    CHECK((kernel.G - kernel.G.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel.G);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }

  const linalg::Subspace s12 = as_subspace(oracles::random_basis(12, 3, 77));
  const linalg::Subspace t12 = as_subspace(oracles::random_basis(12, 3, 78));
  const linalg::GfkKernel k12 = linalg::gfk_kernel(s12, t12);
  CHECK((k12.G - oracles::gfk_quadrature(s12, t12, 10000)).cwiseAbs().maxCoeff() <=
        1e-6);
}

TEST_CASE("gfk needs room for a rank-k complement") {
  const linalg::Subspace s = as_subspace(oracles::random_basis(5, 3, 4));
  const linalg::Subspace t = as_subspace(oracles::random_basis(5, 3, 5));
  CHECK(thrown_kind([&] { linalg::gfk_kernel(s, t); }) == "complement-rank");
}

TEST_CASE("identical subspaces give zero angles and a projector-like kernel") {
  const linalg::Subspace s = as_subspace(oracles::random_basis(8, 3, 21));
  const linalg::GfkKernel kernel = linalg::gfk_kernel(s, s);
  CHECK(kernel.theta.cwiseAbs().maxCoeff() <= 1e-7);
  // At zero angle the integrand is constant: G = 2 Ps Ps^T.
  CHECK((kernel.G - 2.0 * s.basis * s.basis.transpose()).cwiseAbs().maxCoeff() <=
        1e-7);
}

TEST_CASE("psd_sqrt reconstructs the kernel and feeds the bilinear identity") {
  // Rank-4 Gram matrix: the zero eigenvalues exercise the clamp below.
  Eigen::MatrixXd A = oracles::gaussian_matrix(4, 6, 55);
  const Eigen::MatrixXd G = A.transpose() * A;
  const Eigen::MatrixXd S = linalg::psd_sqrt(G);

  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((S * S - G).cwiseAbs().maxCoeff() <= 1e-10 * G.cwiseAbs().maxCoeff());

  // x^T G y equals the inner product of the embedded vectors.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd x = oracles::gaussian_matrix(6, 1, 900 + seed);
    const Eigen::VectorXd y = oracles::gaussian_matrix(6, 1, 950 + seed);
    CHECK(std::abs(x.dot(G * y) - (S * x).dot(S * y)) <= 1e-6);
  }

  // Tiny negative eigenvalues are noise and get clamped: no NaN from a
  // negative sqrt, spectrum nonnegative up to reassembly rounding.
  const Eigen::MatrixXd almost =
      G - 1e-9 * Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd S2 = linalg::psd_sqrt(almost);
  CHECK(S2.allFinite());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S2);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("psd_sqrt rejects non-symmetric and indefinite inputs") {
  CHECK(thrown_kind([] { linalg::psd_sqrt(Eigen::MatrixXd::Zero(2, 3)); }) ==
        "not-symmetric");
  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 0.5,
      -0.5, 1.0;
  CHECK(thrown_kind([&] { linalg::psd_sqrt(skew); }) == "not-symmetric");
  Eigen::MatrixXd indef = Eigen::MatrixXd::Identity(2, 2);
  indef(1, 1) = -1.0;
  CHECK(thrown_kind([&] { linalg::psd_sqrt(indef); }) ==
        "significantly-indefinite");
}
