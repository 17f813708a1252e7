#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "simvec/preprocess.hpp"
#include "simvec/svd.hpp"
#include "simvec/tfidf.hpp"
#include "simvec/vectors.hpp"

namespace simvec {

enum class MatrixWeighting { kRawCount, kBinary, kTfidf };

MatrixWeighting parse_weighting(std::string_view name);

// Document-term matrix: one row per stream, one column per vocabulary term.
struct TermDocMatrix {
  SparseMatrix x;
  MatrixWeighting weighting = MatrixWeighting::kTfidf;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
};

TermDocMatrix build_matrix(std::span<const TokenStream> streams, const Vocabulary& vocab,
                           MatrixWeighting weighting = MatrixWeighting::kTfidf);

enum class SvdSolver { kAuto, kDense, kRandomized };

struct LsiOptions {
  SvdSolver solver = SvdSolver::kAuto;
  // Documents per streamed block; 0 or >= rows factors the whole matrix at once.
  std::size_t chunksize = 0;
  // Multiplier on the accumulated factorization before each block merge.
  double decay = 1.0;
  RandomizedSvdOptions randomized{};
};

// kAuto switches to the randomized solver above this many matrix cells.
inline constexpr std::int64_t kDenseSolverMaxCells = 500 * 500;

// X ~= V * diag(sigma) * U^T with U (terms x k) the term-topic factor and
// V (docs x k) the document-topic factor.
class LsiModel {
 public:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  LsiModel() = default;
  LsiModel(RowMatrix u, Eigen::VectorXd sigma, RowMatrix v);

  int k() const { return static_cast<int>(sigma_.size()); }
  Eigen::Index n_terms() const { return u_.rows(); }
  Eigen::Index n_docs() const { return v_.rows(); }
  const RowMatrix& u() const { return u_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  const RowMatrix& v() const { return v_; }

  // sigma (elementwise) V[i, :]. Throws simvec::Error when i is out of range.
  DenseVector doc_vector(std::size_t i) const;
  // d^T U. Throws simvec::Error when d.dim differs from n_terms().
  DenseVector fold_in(const SparseVector& d) const;

  // Binary format: magic, version byte, k / n_terms / n_docs as uint64,
  // then U (row-major), sigma, V (row-major) as native doubles.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static LsiModel load(std::istream& in);
  static LsiModel load(const std::string& path);

 private:
  RowMatrix u_;
  Eigen::VectorXd sigma_;
  RowMatrix v_;
};

// Top-k factorization of X. Throws simvec::Error when k is outside
// [1, min(rows, cols)], X is zero, or X has fewer than k nonzero singular
// values.
LsiModel truncated_svd(const TermDocMatrix& x, int k, const LsiOptions& options = {});

}  // namespace simvec
