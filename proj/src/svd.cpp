#include "simvec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simvec/error.hpp"
#include "simvec/kernels.hpp"
#include "simvec/rng.hpp"

namespace simvec {

namespace {

std::span<double> column(Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

// Tall case (rows >= cols): orthogonalizes the columns of w in place while
// accumulating the rotations in v.
void hestenes(Eigen::MatrixXd& w, Eigen::MatrixXd& v) {
  const Eigen::Index n = w.cols();
  const double tol =
      std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Eigen::Index>(w.rows(), 1));
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = kernels::squared_norm(column(w, p));
        const double beta = kernels::squared_norm(column(w, q));
        const double gamma = kernels::dot(column(w, p), column(w, q));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        Eigen::VectorXd wp = w.col(p);
        w.col(p) = c * wp - s * w.col(q);
        w.col(q) = s * wp + c * w.col(q);
        Eigen::VectorXd vp = v.col(p);
        v.col(p) = c * vp - s * v.col(q);
        v.col(q) = s * vp + c * v.col(q);
      }
    }
    if (!rotated) return;
  }
}

// Replaces the listed columns of u with unit vectors orthogonal to all
// other columns.
void complete_basis(Eigen::MatrixXd& u, const std::vector<Eigen::Index>& missing) {
  if (missing.empty()) return;
  std::vector<bool> is_missing(static_cast<std::size_t>(u.cols()), false);
  for (auto j : missing) is_missing[static_cast<std::size_t>(j)] = true;
  std::vector<Eigen::Index> basis;
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    if (!is_missing[static_cast<std::size_t>(j)]) basis.push_back(j);
  Eigen::Index next_unit = 0;
  for (auto j : missing) {
    while (next_unit < u.rows()) {
      Eigen::VectorXd cand = Eigen::VectorXd::Unit(u.rows(), next_unit++);
      for (int pass = 0; pass < 2; ++pass)
        for (auto b : basis) cand -= u.col(b).dot(cand) * u.col(b);
      double nrm = cand.norm();
      if (nrm > 1e-8) {
        u.col(j) = cand / nrm;
        basis.push_back(j);
        break;
      }
    }
  }
}

SvdResult jacobi_tall(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd w = a;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(a.cols(), a.cols());
  hestenes(w, v);

  const Eigen::Index n = a.cols();
  Eigen::VectorXd norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms[j] = w.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms[x] > norms[y]; });

  SvdResult r;
  r.left.resize(a.rows(), n);
  r.sigma.resize(n);
  r.right.resize(n, n);
  const double cutoff =
      (n > 0 ? norms[order[0]] : 0.0) * std::numeric_limits<double>::epsilon() *
      static_cast<double>(std::max(a.rows(), a.cols()));
  std::vector<Eigen::Index> zero_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j = order[static_cast<std::size_t>(i)];
    r.sigma[i] = norms[j];
    r.right.col(i) = v.col(j);
    if (norms[j] > cutoff && norms[j] > 0.0) {
      r.left.col(i) = w.col(j) / norms[j];
    } else {
      r.sigma[i] = 0.0;
      r.left.col(i).setZero();
      zero_cols.push_back(i);
    }
  }
  complete_basis(r.left, zero_cols);
  return r;
}

void qr_orthonormalize(Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  m = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

SvdResult jacobi_svd(const Eigen::MatrixXd& a) {
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  SvdResult t = jacobi_tall(a.transpose());
  return {std::move(t.right), std::move(t.sigma), std::move(t.left)};
}

SvdResult randomized_svd(const SparseMatrix& a, int k, const RandomizedSvdOptions& options) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (k < 1 || k > std::min(m, n)) throw Error("randomized_svd: k out of range");
  const Eigen::Index l = std::min<Eigen::Index>(k + options.oversampling, std::min(m, n));

  Rng rng(options.seed);
  Eigen::MatrixXd omega(n, l);
  for (Eigen::Index j = 0; j < l; ++j)
    for (Eigen::Index i = 0; i < n; ++i) omega(i, j) = rng.normal();

  Eigen::MatrixXd q = a * omega;
  qr_orthonormalize(q);
  for (int it = 0; it < options.power_iterations; ++it) {
    Eigen::MatrixXd z = a.transpose() * q;
    qr_orthonormalize(z);
    q = a * z;
    qr_orthonormalize(q);
  }
  // B = Q^T A, l x n; factor its transpose so the solver sees a tall matrix.
  Eigen::MatrixXd bt = a.transpose() * q;
  SvdResult small = jacobi_tall(bt);  // bt = small.left * S * small.right^T
  SvdResult r;
  r.left = q * small.right;
  r.sigma = small.sigma;
  r.right = small.left;
  return truncate(std::move(r), k);
}

SvdResult truncate(SvdResult svd, int k) {
  if (k < 0 || k > svd.sigma.size()) throw Error("truncate: k out of range");
  svd.left.conservativeResize(Eigen::NoChange, k);
  svd.right.conservativeResize(Eigen::NoChange, k);
  svd.sigma.conservativeResize(k);
  return svd;
}

void fix_signs_by_right(SvdResult& svd) {
  for (Eigen::Index j = 0; j < svd.right.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < svd.right.rows(); ++i) {
      double v = std::abs(svd.right(i, j));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (svd.right.rows() > 0 && svd.right(best, j) < 0.0) {
      svd.right.col(j) *= -1.0;
      svd.left.col(j) *= -1.0;
    }
  }
}

}  // namespace simvec
