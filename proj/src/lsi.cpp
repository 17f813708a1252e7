#include "simvec/lsi.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "simvec/error.hpp"
#include "simvec/kernels.hpp"

namespace simvec {

MatrixWeighting parse_weighting(std::string_view name) {
  if (name == "raw-count" || name == "raw") return MatrixWeighting::kRawCount;
  if (name == "binary") return MatrixWeighting::kBinary;
  if (name == "tfidf") return MatrixWeighting::kTfidf;
  throw Error("unknown matrix weighting '" + std::string(name) + "'");
}

TermDocMatrix build_matrix(std::span<const TokenStream> streams, const Vocabulary& vocab,
                           MatrixWeighting weighting) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    for (auto [term, tf] : term_counts(streams[i].tokens, vocab)) {
      double w = 0.0;
      switch (weighting) {
        case MatrixWeighting::kRawCount:
          w = tf;
          break;
        case MatrixWeighting::kBinary:
          w = 1.0;
          break;
        case MatrixWeighting::kTfidf:
          w = tfidf_weight(tf, vocab.n_docs(), vocab.df(term));
          break;
      }
      if (w != 0.0)
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(term), w);
    }
  }
  TermDocMatrix m;
  m.weighting = weighting;
  m.x.resize(static_cast<Eigen::Index>(streams.size()), static_cast<Eigen::Index>(vocab.size()));
  m.x.setFromTriplets(triplets.begin(), triplets.end());
  m.x.makeCompressed();
  return m;
}

LsiModel::LsiModel(RowMatrix u, Eigen::VectorXd sigma, RowMatrix v)
    : u_(std::move(u)), sigma_(std::move(sigma)), v_(std::move(v)) {
  if (u_.cols() != sigma_.size() || v_.cols() != sigma_.size())
    throw Error("lsi model: factor shapes disagree");
}

DenseVector LsiModel::doc_vector(std::size_t i) const {
  if (i >= static_cast<std::size_t>(v_.rows()))
    throw Error("lsi doc_vector: index " + std::to_string(i) + " out of range");
  DenseVector out(static_cast<std::size_t>(k()));
  for (int j = 0; j < k(); ++j) out.values[j] = sigma_[j] * v_(static_cast<Eigen::Index>(i), j);
  return out;
}

DenseVector LsiModel::fold_in(const SparseVector& d) const {
  if (d.dim != static_cast<std::size_t>(u_.rows()))
    throw Error("lsi fold_in: document dimension " + std::to_string(d.dim) +
                " does not match " + std::to_string(u_.rows()) + " terms");
  DenseVector out(static_cast<std::size_t>(k()));
  const auto width = static_cast<std::size_t>(k());
  for (const auto& e : d.entries)
    kernels::axpy(e.weight, {u_.row(e.index).data(), width}, out.view());
  return out;
}

namespace {

constexpr char kMagic[6] = {'S', 'V', 'L', 'S', 'I', '\0'};
constexpr std::uint8_t kLsiVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("lsi model: truncated file");
  return v;
}
void put_doubles(std::ostream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
void get_doubles(std::istream& in, double* p, std::size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw Error("lsi model: truncated file");
}

}  // namespace

void LsiModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put(out, kLsiVersion);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(k()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(u_.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(v_.rows()));
  put_doubles(out, u_.data(), static_cast<std::size_t>(u_.size()));
  put_doubles(out, sigma_.data(), static_cast<std::size_t>(sigma_.size()));
  put_doubles(out, v_.data(), static_cast<std::size_t>(v_.size()));
  if (!out) throw Error("lsi model: write failed");
}

void LsiModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write lsi model '" + path + "'");
  save(out);
}

LsiModel LsiModel::load(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error("lsi model: bad magic");
  auto version = get<std::uint8_t>(in);
  if (version != kLsiVersion)
    throw Error("lsi model: unsupported version " + std::to_string(version));
  auto k = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  auto terms = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  auto docs = static_cast<Eigen::Index>(get<std::uint64_t>(in));
  RowMatrix u(terms, k);
  Eigen::VectorXd sigma(k);
  RowMatrix v(docs, k);
  get_doubles(in, u.data(), static_cast<std::size_t>(u.size()));
  get_doubles(in, sigma.data(), static_cast<std::size_t>(sigma.size()));
  get_doubles(in, v.data(), static_cast<std::size_t>(v.size()));
  return LsiModel(std::move(u), std::move(sigma), std::move(v));
}

LsiModel LsiModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read lsi model '" + path + "'");
  return load(in);
}

namespace {

bool use_dense(const SparseMatrix& x, SvdSolver solver) {
  if (solver == SvdSolver::kDense) return true;
  if (solver == SvdSolver::kRandomized) return false;
  return static_cast<std::int64_t>(x.rows()) * x.cols() <= kDenseSolverMaxCells;
}

SvdResult factor(const SparseMatrix& x, int k, const LsiOptions& options) {
  if (use_dense(x, options.solver)) return truncate(jacobi_svd(Eigen::MatrixXd(x)), k);
  return randomized_svd(x, k, options.randomized);
}

// Number of leading singular values that are numerically nonzero.
int numeric_rank(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
  int r = 0;
  while (r < sigma.size() && sigma[r] > 1e-12 * sigma[0]) ++r;
  return r;
}

}  // namespace

LsiModel truncated_svd(const TermDocMatrix& m, int k, const LsiOptions& options) {
  const SparseMatrix& x = m.x;
  if (k < 1 || k > std::min(x.rows(), x.cols()))
    throw Error("truncated_svd: k=" + std::to_string(k) + " outside [1, " +
                std::to_string(std::min(x.rows(), x.cols())) + "]");
  if (x.nonZeros() == 0 || x.coeffs().cwiseAbs().maxCoeff() == 0.0)
    throw Error("truncated_svd: matrix is zero");
  if (options.decay <= 0.0 || options.decay > 1.0)
    throw Error("truncated_svd: decay must be in (0, 1]");

  SvdResult svd;
  const auto rows = static_cast<std::size_t>(x.rows());
  if (options.chunksize == 0 || options.chunksize >= rows) {
    svd = factor(x, k, options);
  } else {
    // Streamed accumulation: keep the term-space factor U*S of the documents
    // seen so far, merge each block's factor into it and re-truncate.
    Eigen::MatrixXd us;  // terms x r
    for (std::size_t r0 = 0; r0 < rows; r0 += options.chunksize) {
      const auto len = static_cast<Eigen::Index>(std::min(options.chunksize, rows - r0));
      SparseMatrix block = x.middleRows(static_cast<Eigen::Index>(r0), len);
      if (block.nonZeros() == 0) continue;
      const int kc = static_cast<int>(std::min<Eigen::Index>({k, len, x.cols()}));
      SvdResult b = factor(block, kc, options);
      const int rb = numeric_rank(b.sigma);
      Eigen::MatrixXd block_us = b.right.leftCols(rb) * b.sigma.head(rb).asDiagonal();
      if (us.size() == 0) {
        us = std::move(block_us);
      } else {
        Eigen::MatrixXd stacked(us.rows(), us.cols() + block_us.cols());
        stacked << options.decay * us, block_us;
        SvdResult merged = jacobi_svd(stacked);
        const int keep = std::min(k, numeric_rank(merged.sigma));
        us = merged.left.leftCols(keep) * merged.sigma.head(keep).asDiagonal();
      }
    }
    const int r = static_cast<int>(us.cols());
    Eigen::VectorXd sigma(r);
    Eigen::MatrixXd u(us.rows(), r);
    for (int j = 0; j < r; ++j) {
      sigma[j] = us.col(j).norm();
      u.col(j) = us.col(j) / sigma[j];
    }
    svd.right = std::move(u);
    svd.sigma = std::move(sigma);
    // Document factor from projection: V = X U S^-1.
    svd.left = (x * svd.right) * svd.sigma.cwiseInverse().asDiagonal();
  }

  if (numeric_rank(svd.sigma) < k)
    throw Error("truncated_svd: matrix has fewer than k=" + std::to_string(k) +
                " nonzero singular values");
  fix_signs_by_right(svd);
  return LsiModel(LsiModel::RowMatrix(svd.right), svd.sigma, LsiModel::RowMatrix(svd.left));
}

}  // namespace simvec
