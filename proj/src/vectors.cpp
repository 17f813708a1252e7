#include "simvec/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simvec/error.hpp"
#include "simvec/kernels.hpp"

namespace simvec {

SparseVector SparseVector::from_unsorted(std::vector<SparseEntry> entries,
                                         std::size_t dim) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
  SparseVector out;
  out.dim = dim;
  for (const auto& e : entries) {
    if (!out.entries.empty() && out.entries.back().index == e.index)
      out.entries.back().weight += e.weight;
    else
      out.entries.push_back(e);
  }
  std::erase_if(out.entries, [](const SparseEntry& e) { return e.weight == 0.0; });
  return out;
}

DenseVector SparseVector::to_dense() const {
  DenseVector d(dim);
  for (const auto& e : entries) d.values[e.index] = e.weight;
  return d;
}

bool SparseVector::valid() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= dim || entries[i].weight == 0.0) return false;
    if (i > 0 && entries[i - 1].index >= entries[i].index) return false;
  }
  return true;
}

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      s += ia->weight * ib->weight;
      ++ia;
      ++ib;
    }
  }
  return s;
}

double dot(const DenseVector& a, const DenseVector& b) {
  return kernels::dot(a.view(), b.view());
}

double norm(const SparseVector& a) {
  double s = 0.0;
  for (const auto& e : a.entries) s += e.weight * e.weight;
  return std::sqrt(s);
}

double norm(const DenseVector& a) { return std::sqrt(kernels::squared_norm(a.view())); }

namespace {

CosineResult finish(double ab, double na, double nb) {
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  return {std::clamp(ab / (na * nb), -1.0, 1.0), false};
}

void check_dims(std::size_t da, std::size_t db) {
  if (da != db)
    throw Error("cosine: dimension mismatch (" + std::to_string(da) + " vs " +
                std::to_string(db) + ")");
}

}  // namespace

CosineResult cosine_checked(const SparseVector& a, const SparseVector& b) {
  check_dims(a.dim, b.dim);
  return finish(dot(a, b), norm(a), norm(b));
}

CosineResult cosine_checked(const DenseVector& a, const DenseVector& b) {
  check_dims(a.dim(), b.dim());
  return finish(dot(a, b), norm(a), norm(b));
}

}  // namespace simvec
