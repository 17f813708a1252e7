#include "simvec/tfidf.hpp"

#include <algorithm>
#include <map>

#include "simvec/error.hpp"

namespace simvec {

std::optional<TermIndex> Vocabulary::index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary Vocabulary::from_counts(std::vector<std::pair<std::string, std::uint32_t>> term_df,
                                   std::uint64_t n_docs) {
  std::sort(term_df.begin(), term_df.end());
  Vocabulary v;
  v.n_docs_ = n_docs;
  v.terms_.reserve(term_df.size());
  v.df_.reserve(term_df.size());
  v.index_.reserve(term_df.size());
  for (auto& [term, df] : term_df) {
    if (df == 0 || df > n_docs) throw Error("vocabulary: df out of range for '" + term + "'");
    auto idx = static_cast<TermIndex>(v.terms_.size());
    if (!v.index_.emplace(term, idx).second) throw Error("vocabulary: duplicate term '" + term + "'");
    v.terms_.push_back(std::move(term));
    v.df_.push_back(df);
  }
  return v;
}

Vocabulary build_vocabulary(std::span<const TokenStream> streams) {
  DfCounter counter;
  for (const auto& s : streams) counter.add(s.tokens);
  if (counter.counts().empty()) throw Error("empty vocabulary");
  std::vector<std::pair<std::string, std::uint32_t>> term_df(counter.counts().begin(),
                                                              counter.counts().end());
  return Vocabulary::from_counts(std::move(term_df), counter.n_docs());
}

std::vector<std::pair<TermIndex, std::uint32_t>> term_counts(std::span<const std::string> tokens,
                                                             const Vocabulary& vocab) {
  std::vector<TermIndex> idx;
  idx.reserve(tokens.size());
  for (const auto& t : tokens)
    if (auto i = vocab.index(t)) idx.push_back(*i);
  std::sort(idx.begin(), idx.end());
  std::vector<std::pair<TermIndex, std::uint32_t>> out;
  for (TermIndex i : idx) {
    if (!out.empty() && out.back().first == i)
      ++out.back().second;
    else
      out.emplace_back(i, 1);
  }
  return out;
}

SparseVector tfidf_vector(const TokenStream& stream, const Vocabulary& vocab) {
  SparseVector v;
  v.dim = vocab.size();
  for (auto [i, tf] : term_counts(stream.tokens, vocab)) {
    double w = tfidf_weight(tf, vocab.n_docs(), vocab.df(i));
    if (w != 0.0) v.entries.push_back({i, w});
  }
  return v;
}

std::optional<std::size_t> DfTimeline::snapshot(std::int32_t month_index) const {
  auto it = std::upper_bound(months_.begin(), months_.end(), month_index);
  if (it == months_.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - months_.begin() - 1);
}

std::uint32_t DfTimeline::df_at(TermIndex term, std::size_t pos) const {
  const auto& steps = steps_[term];
  auto it = std::upper_bound(steps.begin(), steps.end(), pos,
                             [](std::size_t p, const Step& s) { return p < s.pos; });
  if (it == steps.begin()) return 0;
  return std::prev(it)->cumulative_df;
}

std::uint64_t DfTimeline::n_in_month(std::int32_t month_index) const {
  auto pos = snapshot(month_index);
  return pos ? n_at(*pos) : 0;
}

std::uint32_t DfTimeline::df_in_month(TermIndex term, std::int32_t month_index) const {
  auto pos = snapshot(month_index);
  return pos ? df_at(term, *pos) : 0;
}

DfTimeline build_df_timeline(const Corpus& corpus, std::span<const TokenStream> streams,
                             const Vocabulary& vocab) {
  DfTimeline tl;
  std::vector<std::int32_t> doc_month(streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const Document& d = corpus.at(streams[i].doc_id);
    doc_month[i] = d.date.month_index();
    tl.months_.push_back(doc_month[i]);
  }
  std::sort(tl.months_.begin(), tl.months_.end());
  tl.months_.erase(std::unique(tl.months_.begin(), tl.months_.end()), tl.months_.end());
  const std::size_t n_months = tl.months_.size();

  // Per-month aggregates: documents and per-term document counts.
  std::vector<std::uint64_t> month_docs(n_months, 0);
  std::vector<std::map<TermIndex, std::uint32_t>> month_df(n_months);
  std::vector<std::uint32_t> full_df(vocab.size(), 0);
  for (std::size_t i = 0; i < streams.size(); ++i) {
    auto pos = *tl.snapshot(doc_month[i]);
    ++month_docs[pos];
    for (auto [term, tf] : term_counts(streams[i].tokens, vocab)) {
      ++month_df[pos][term];
      ++full_df[term];
    }
  }

  // Walk backward from the full corpus, removing each month's documents
  // once we step before it.
  tl.cumulative_n_.assign(n_months, 0);
  std::uint64_t n = streams.size();
  std::vector<std::uint32_t> df = full_df;
  tl.steps_.assign(vocab.size(), {});
  for (std::size_t p = n_months; p-- > 0;) {
    tl.cumulative_n_[p] = n;
    // A term's value at p changes relative to p-1 only if month p added to it.
    for (auto [term, count] : month_df[p]) {
      tl.steps_[term].push_back({static_cast<std::uint32_t>(p), df[term]});
      df[term] -= count;
    }
    n -= month_docs[p];
  }
  for (auto& steps : tl.steps_) std::reverse(steps.begin(), steps.end());
  return tl;
}

SparseVector incremental_tfidf_vector(const TokenStream& stream, const Vocabulary& vocab,
                                      const DfTimeline& timeline, std::int32_t month_index) {
  auto pos = timeline.snapshot(month_index);
  if (!pos) throw Error("incremental tfidf: month precedes the first corpus month");
  if (timeline.vocab_size() != vocab.size())
    throw Error("incremental tfidf: timeline and vocabulary disagree");
  const std::uint64_t n = timeline.n_at(*pos);
  SparseVector v;
  v.dim = vocab.size();
  for (auto [i, tf] : term_counts(stream.tokens, vocab)) {
    double w = tfidf_weight(tf, n, timeline.df_at(i, *pos));
    if (w != 0.0) v.entries.push_back({i, w});
  }
  return v;
}

TokenStream augment_with_phrases(TokenStream stream, const PhraseCounts& phrases) {
  for (const auto& [joined, count] : phrases)
    for (std::uint32_t c = 0; c < count; ++c) stream.tokens.push_back(joined);
  return stream;
}

}  // namespace simvec
