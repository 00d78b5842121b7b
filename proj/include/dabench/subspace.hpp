#pragma once

#include <Eigen/Core>

namespace dabench::linalg {

// Column-orthonormal PCA basis with the centering mean it was fit with.
struct Subspace {
  Eigen::MatrixXd basis;  // d x k, columns orthonormal
  Eigen::VectorXd mean;   // d
  int k = 0;

  Eigen::Index dim() const { return basis.rows(); }
  // Centered projection of row-example matrix X: (X - mean^T) * basis.
  Eigen::MatrixXd project(const Eigen::MatrixXd& X) const;
};

// M = Ps^T Pt, the Frobenius-optimal map taking the source basis onto the
// target basis.
struct AlignmentMap {
  Eigen::MatrixXd M;  // k x k
};

// Geodesic flow kernel between two k-dimensional subspaces of R^d, with the
// principal angles that parameterize it.
struct GfkKernel {
  Eigen::MatrixXd G;      // d x d, symmetric PSD
  Eigen::VectorXd theta;  // k principal angles, non-decreasing, in [0, pi/2]
};

// Top-k principal directions of the centered data, columns ordered by
// decreasing singular value. Sign convention: the largest-magnitude entry of
// each column is positive. Throws k-out-of-range when k > min(n-1, d) and
// rank-deficient when the centered data has effective rank < k.
Subspace pca(const Eigen::MatrixXd& X, int k);

// Largest k that pca(X, k) accepts: the effective rank of the centered data,
// capped at min(n-1, d). Zero when n < 2.
int pca_max_k(const Eigen::MatrixXd& X);

AlignmentMap align_subspaces(const Subspace& source, const Subspace& target);

// theta_i = arccos(sigma_i) for singular values sigma of Ps^T Pt clamped to
// [0,1], sorted non-decreasing.
Eigen::VectorXd principal_angles(const Subspace& source, const Subspace& target);

// Closed-form geodesic flow kernel. Requires 2k <= d so the orthogonal
// complement of the source basis admits rank k.
GfkKernel gfk_kernel(const Subspace& source, const Subspace& target);

// Symmetric PSD square root via eigendecomposition; eigenvalues in
// [-1e-8, 0) are clamped to zero. Throws not-symmetric / significantly-indefinite.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& G);

}  // namespace dabench::linalg
