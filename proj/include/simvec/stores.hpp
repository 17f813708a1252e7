#pragma once

// Plain-text stores for intermediate pipeline products.
//   tokens:  "# field <name>" header, then "id<TAB>tok tok ..."
//   phrases: "id<TAB>phrase:count ..."
//   vectors: "# vectors sparse|dense <dim>" header, then either
//            "id<TAB>index:weight ..." or "id<TAB>v0 v1 ..."
// Reals are written with max_digits10 so a round trip is lossless.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simvec/phrases.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/vectors.hpp"

namespace simvec {

void write_token_store(std::span<const TokenStream> streams, std::ostream& out);
void write_token_store(std::span<const TokenStream> streams, const std::string& path);
std::vector<TokenStream> read_token_store(std::istream& in);
std::vector<TokenStream> read_token_store(const std::string& path);

struct DocPhrases {
  std::string doc_id;
  PhraseCounts counts;
  bool operator==(const DocPhrases&) const = default;
};

void write_phrase_store(std::span<const DocPhrases> docs, std::ostream& out);
void write_phrase_store(std::span<const DocPhrases> docs, const std::string& path);
std::vector<DocPhrases> read_phrase_store(std::istream& in);
std::vector<DocPhrases> read_phrase_store(const std::string& path);

// Per-document vectors, all sparse or all dense, keyed by document id.
class VectorStore {
 public:
  VectorStore() = default;
  static VectorStore sparse(std::size_t dim) { return VectorStore(false, dim); }
  static VectorStore dense(std::size_t dim) { return VectorStore(true, dim); }

  bool is_dense() const { return dense_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  // Throws simvec::Error on a duplicate id, wrong kind or wrong dimension.
  void add(const std::string& id, SparseVector v);
  void add(const std::string& id, DenseVector v);

  const SparseVector& sparse_at(std::size_t i) const { return sparse_[i]; }
  const DenseVector& dense_at(std::size_t i) const { return dense_vecs_[i]; }

  // Cosine between two stored documents; throws naming an unknown id.
  CosineResult similarity(const std::string& a, const std::string& b) const;

  void write(std::ostream& out) const;
  void write(const std::string& path) const;
  static VectorStore read(std::istream& in);
  static VectorStore read(const std::string& path);

  bool operator==(const VectorStore& o) const {
    return dense_ == o.dense_ && dim_ == o.dim_ && ids_ == o.ids_ && sparse_ == o.sparse_ &&
           dense_vecs_ == o.dense_vecs_;
  }

 private:
  VectorStore(bool dense, std::size_t dim) : dense_(dense), dim_(dim) {}
  std::size_t position(const std::string& id) const;

  bool dense_ = false;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<SparseVector> sparse_;
  std::vector<DenseVector> dense_vecs_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace simvec
