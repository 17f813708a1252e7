#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "simvec/corpus.hpp"
#include "simvec/phrases.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/vectors.hpp"

namespace simvec {

// TF * ln((n_docs + 1) / (df + 1)). Every TFIDF path goes through here so
// that the full-corpus and snapshot weights agree bit for bit.
inline double tfidf_weight(std::uint32_t tf, std::uint64_t n_docs, std::uint64_t df) {
  return static_cast<double>(tf) *
         std::log(static_cast<double>(n_docs + 1) / static_cast<double>(df + 1));
}

// Term -> dense index (lexicographic order) with document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  std::uint64_t n_docs() const { return n_docs_; }
  std::optional<TermIndex> index(const std::string& term) const;
  const std::string& term(TermIndex i) const { return terms_[i]; }
  std::uint32_t df(TermIndex i) const { return df_[i]; }
  const std::vector<std::string>& terms() const { return terms_; }

  // Used by the vocabulary builder and by store loaders.
  static Vocabulary from_counts(std::vector<std::pair<std::string, std::uint32_t>> term_df,
                                std::uint64_t n_docs);

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::unordered_map<std::string, TermIndex> index_;
  std::uint64_t n_docs_ = 0;
};

// n_docs counts every stream, empty ones included. Throws simvec::Error
// ("empty vocabulary") when no stream has a token.
Vocabulary build_vocabulary(std::span<const TokenStream> streams);

// Raw in-document counts of the vocabulary terms in `tokens`, sorted by index.
std::vector<std::pair<TermIndex, std::uint32_t>> term_counts(
    std::span<const std::string> tokens, const Vocabulary& vocab);

SparseVector tfidf_vector(const TokenStream& stream, const Vocabulary& vocab);

// Per-term document frequencies aggregated by calendar month, answering
// "corpus as of the end of month T" queries. Built from the full-corpus DF
// by subtracting the documents of later months.
class DfTimeline {
 public:
  // Months present in the corpus, ascending, as Date::month_index() values.
  const std::vector<std::int32_t>& months() const { return months_; }

  // Snapshot position for month T: the last corpus month <= T, or nullopt
  // when T precedes the first document.
  std::optional<std::size_t> snapshot(std::int32_t month_index) const;

  // Cumulative values at snapshot position `pos`.
  std::uint64_t n_at(std::size_t pos) const { return cumulative_n_[pos]; }
  std::uint32_t df_at(TermIndex term, std::size_t pos) const;

  // Month-based queries; zero before the first month.
  std::uint64_t n_in_month(std::int32_t month_index) const;
  std::uint32_t df_in_month(TermIndex term, std::int32_t month_index) const;

  std::size_t vocab_size() const { return steps_.size(); }

 private:
  friend DfTimeline build_df_timeline(const Corpus&, std::span<const TokenStream>,
                                      const Vocabulary&);
  struct Step {
    std::uint32_t pos;
    std::uint32_t cumulative_df;
  };
  std::vector<std::int32_t> months_;
  std::vector<std::uint64_t> cumulative_n_;
  // Per term, ascending snapshot positions where its cumulative DF changes.
  std::vector<std::vector<Step>> steps_;
};

// Streams are matched to documents by doc_id; throws simvec::Error for an
// id missing from the corpus. Terms outside `vocab` are ignored.
DfTimeline build_df_timeline(const Corpus& corpus, std::span<const TokenStream> streams,
                             const Vocabulary& vocab);

// TFIDF against the corpus snapshot at month T. Terms with zero snapshot DF
// get the maximal IDF ln(n_T + 1). Throws simvec::Error when T precedes the
// first corpus month.
SparseVector incremental_tfidf_vector(const TokenStream& stream, const Vocabulary& vocab,
                                      const DfTimeline& timeline, std::int32_t month_index);

// Appends each phrase's joined form `count` times.
TokenStream augment_with_phrases(TokenStream stream, const PhraseCounts& phrases);

}  // namespace simvec
