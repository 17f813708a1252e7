#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>

namespace simvec {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// A ~= left * diag(sigma) * right^T with sigma descending.
struct SvdResult {
  Eigen::MatrixXd left;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd right;
};

// Full thin SVD by one-sided (Hestenes) Jacobi rotations. Left and right
// factors have min(m, n) orthonormal columns; for zero singular values the
// left columns are completed to an orthonormal set.
SvdResult jacobi_svd(const Eigen::MatrixXd& a);

struct RandomizedSvdOptions {
  int oversampling = 10;
  int power_iterations = 2;
  std::uint64_t seed = 0;
};

// Top-k SVD through a Gaussian range finder with power iterations, the
// projected problem solved by jacobi_svd.
SvdResult randomized_svd(const SparseMatrix& a, int k, const RandomizedSvdOptions& options);

// Keeps the leading k triplets.
SvdResult truncate(SvdResult svd, int k);

// Flips each triplet so the largest-magnitude entry of its right vector is
// positive (first such entry on ties).
void fix_signs_by_right(SvdResult& svd);

}  // namespace simvec
