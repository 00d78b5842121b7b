#include "dabench/subspace.hpp"

#include "dabench/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace dabench::linalg {

namespace {

void require_compatible(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim())
    throw Error("dimension-mismatch", "ambient dims differ: " +
                                          std::to_string(a.dim()) + " vs " +
                                          std::to_string(b.dim()));
  if (a.k != b.k)
    throw Error("dimension-mismatch", "subspace dims differ: " +
                                          std::to_string(a.k) + " vs " +
                                          std::to_string(b.k));
}

// Largest-magnitude entry of each column made positive, first occurrence wins.
void fix_column_signs(Eigen::MatrixXd& B) {
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
      double a = std::abs(B(r, c));
      if (a > amax) {
        amax = a;
        imax = r;
      }
    }
    if (B(imax, c) < 0) B.col(c) = -B.col(c);
  }
}

// Orthonormal basis of the complement of P: QR of [P | Gaussian block], then
// one re-orthogonalization sweep of the trailing columns against P.
Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& P) {
  const Eigen::Index d = P.rows();
  const Eigen::Index k = P.cols();
  std::mt19937_64 rng(0x5b5face0f111ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd block(d, d - k);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d - k; ++j) block(i, j) = gauss(rng);

  Eigen::MatrixXd full(d, d);
  full.leftCols(k) = P;
  full.rightCols(d - k) = block;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(full);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd R = Q.rightCols(d - k);

  R -= P * (P.transpose() * R);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr2(R);
  Eigen::MatrixXd R2 =
      qr2.householderQ() * Eigen::MatrixXd::Identity(d, d - k);

  if ((R2.transpose() * P).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("complement-rank", "failed to complete an orthonormal complement");
  return R2;
}

}  // namespace

Eigen::MatrixXd Subspace::project(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean.transpose()) * basis;
}

Subspace pca(const Eigen::MatrixXd& X, int k) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const Eigen::Index k_max = std::min<Eigen::Index>(n - 1, d);
  if (n < 2 || k < 1 || k > k_max)
    throw Error("k-out-of-range", "k=" + std::to_string(k) +
                                      " invalid; max valid k is " +
                                      std::to_string(std::max<Eigen::Index>(k_max, 0)));

  Eigen::VectorXd mean = X.colwise().mean();
  Eigen::MatrixXd Xc = X.rowwise() - mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xc, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  // Effective rank cut at the usual max(n,d)*eps relative threshold.
  const double tol = sv.size() == 0
                         ? 0.0
                         : sv(0) * static_cast<double>(std::max(n, d)) *
                               std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  if (k > rank)
    throw Error("rank-deficient", "effective rank " + std::to_string(rank) +
                                      " < k=" + std::to_string(k) +
                                      "; max valid k is " + std::to_string(rank));

  Subspace s;
  s.basis = svd.matrixV().leftCols(k);
  fix_column_signs(s.basis);
  s.mean = mean;
  s.k = k;
  return s;
}

int pca_max_k(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n < 2 || d < 1) return 0;
  Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xc);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = sv.size() == 0
                         ? 0.0
                         : sv(0) * static_cast<double>(std::max(n, d)) *
                               std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return static_cast<int>(std::min(rank, std::min<Eigen::Index>(n - 1, d)));
}

AlignmentMap align_subspaces(const Subspace& source, const Subspace& target) {
  require_compatible(source, target);
  return AlignmentMap{source.basis.transpose() * target.basis};
}

Eigen::VectorXd principal_angles(const Subspace& source, const Subspace& target) {
  require_compatible(source, target);
  Eigen::MatrixXd M = source.basis.transpose() * target.basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  Eigen::VectorXd theta = svd.singularValues();
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    theta(i) = std::acos(std::clamp(theta(i), 0.0, 1.0));
  std::sort(theta.begin(), theta.end());
  return theta;
}

GfkKernel gfk_kernel(const Subspace& source, const Subspace& target) {
  require_compatible(source, target);
  const Eigen::Index d = source.dim();
  const Eigen::Index k = source.k;
  if (2 * k > d)
    throw Error("complement-rank",
                "need 2k <= d for a rank-k complement; got k=" +
                    std::to_string(k) + ", d=" + std::to_string(d));

  const Eigen::MatrixXd& Ps = source.basis;
  const Eigen::MatrixXd& Pt = target.basis;
  Eigen::MatrixXd Rs = orthonormal_complement(Ps);

  // CS pieces: Ps^T Pt = U1 Gam V^T and Rs^T Pt = -U2 Sig V^T share V; the
  // i-th column of Rs^T Pt V has norm sin(theta_i).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ps.transpose() * Pt,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd U1 = svd.matrixU();
  Eigen::MatrixXd V = svd.matrixV();
  Eigen::VectorXd theta(k);
  for (Eigen::Index i = 0; i < k; ++i)
    theta(i) = std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0));

  Eigen::MatrixXd B = Rs.transpose() * Pt * V;  // (d-k) x k
  Eigen::MatrixXd U2 = Eigen::MatrixXd::Zero(d - k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double s = std::sin(theta(i));
    if (s > 1e-12) U2.col(i) = -B.col(i) / s;
  }

  // Lambda diagonals; below 1e-7 the sin(2t)/(2t) terms switch to their
  // second-order Taylor limits.
  Eigen::VectorXd l1(k), l2(k), l3(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double t = theta(i);
    if (t < 1e-7) {
      l1(i) = 2.0 - 2.0 * t * t / 3.0;
      l2(i) = -t + t * t * t / 3.0;
      l3(i) = 2.0 * t * t / 3.0;
    } else {
      l1(i) = 1.0 + std::sin(2.0 * t) / (2.0 * t);
      l2(i) = (std::cos(2.0 * t) - 1.0) / (2.0 * t);
      l3(i) = 1.0 - std::sin(2.0 * t) / (2.0 * t);
    }
  }

  Eigen::MatrixXd Omega(d, 2 * k);
  Omega.leftCols(k) = Ps * U1;
  Omega.rightCols(k) = Rs * U2;
  Eigen::MatrixXd Lambda = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  Lambda.topLeftCorner(k, k) = l1.asDiagonal();
  Lambda.topRightCorner(k, k) = l2.asDiagonal();
  Lambda.bottomLeftCorner(k, k) = l2.asDiagonal();
  Lambda.bottomRightCorner(k, k) = l3.asDiagonal();

  GfkKernel kernel;
  kernel.G = Omega * Lambda * Omega.transpose();
  kernel.G = 0.5 * (kernel.G + kernel.G.transpose()).eval();
  std::sort(theta.begin(), theta.end());
  kernel.theta = theta;
  return kernel;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols())
    throw Error("not-symmetric", "matrix is not square");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("not-symmetric", "asymmetry exceeds 1e-8");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (G + G.transpose()));
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmax = lambda.size() ? lambda.maxCoeff() : 0.0;
  if (lambda.size() && lambda.minCoeff() < -1e-6 * std::max(lmax, 1.0))
    throw Error("significantly-indefinite",
                "min eigenvalue " + std::to_string(lambda.minCoeff()));
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));

  Eigen::MatrixXd S =
      eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (S + S.transpose());
}

}  // namespace dabench::linalg
