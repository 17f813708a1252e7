#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace simvec {

using TermIndex = std::uint32_t;

// Fixed-length embedding (LSI topic space, D2V/W2V).
struct DenseVector {
  std::vector<double> values;

  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : values(dim, 0.0) {}
  explicit DenseVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t dim() const { return values.size(); }
  std::span<const double> view() const { return values; }
  std::span<double> view() { return values; }
  bool operator==(const DenseVector&) const = default;
};

struct SparseEntry {
  TermIndex index;
  double weight;
  bool operator==(const SparseEntry&) const = default;
};

// Term-indexed weights; indices strictly increasing and < dim, no zeros.
struct SparseVector {
  std::vector<SparseEntry> entries;
  std::size_t dim = 0;

  bool operator==(const SparseVector&) const = default;

  // Sorts, merges duplicate indices by addition and drops zero weights.
  static SparseVector from_unsorted(std::vector<SparseEntry> entries, std::size_t dim);
  DenseVector to_dense() const;
  bool valid() const;
};

double dot(const SparseVector& a, const SparseVector& b);
double dot(const DenseVector& a, const DenseVector& b);
double norm(const SparseVector& a);
double norm(const DenseVector& a);

struct CosineResult {
  double value = 0.0;
  // Set when either operand has zero norm; value is then 0.
  bool zero_norm = false;
};

// Cosine similarity clamped to [-1, 1]. Throws simvec::Error on a
// dimension mismatch.
CosineResult cosine_checked(const SparseVector& a, const SparseVector& b);
CosineResult cosine_checked(const DenseVector& a, const DenseVector& b);

inline double cosine(const SparseVector& a, const SparseVector& b) {
  return cosine_checked(a, b).value;
}
inline double cosine(const DenseVector& a, const DenseVector& b) {
  return cosine_checked(a, b).value;
}

}  // namespace simvec
