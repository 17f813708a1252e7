#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "simvec/corpus.hpp"

namespace simvec {

struct TokenStream {
  std::string doc_id;
  Field field = Field::kTitle;
  std::vector<std::string> tokens;
  bool operator==(const TokenStream&) const = default;
};

// Stopwords are kept in stemmed form and matched against stemmed tokens.
class StopwordSet {
 public:
  StopwordSet() = default;
  // Bundled general English list.
  static StopwordSet english();

  void add(std::string_view word);
  // One term per line; blank lines and '#' comments ignored.
  void add_file(const std::string& path);
  bool contains_stem(std::string_view stem) const { return stems_.contains(std::string(stem)); }
  std::size_t size() const { return stems_.size(); }

 private:
  std::unordered_set<std::string> stems_;
};

struct CleanOptions {
  bool stem = true;
};

// Markup, internet addresses and nucleotide runs removed; tokens split on
// non-alphanumeric boundaries, filtered (digits, under 3 chars, non-ASCII),
// lowercased, stemmed and stopword-filtered. Order preserved.
std::vector<std::string> clean_text(std::string_view raw, const StopwordSet& stopwords,
                                    const CleanOptions& options = {});

// Lowercase ASCII word in, Porter stem out.
std::string stem(std::string_view word);

// Splits on ASCII non-alphanumerics without any filtering. Feeds the phrase
// extractor, which needs the closed-class words that clean_text removes.
std::vector<std::string> raw_tokens(std::string_view raw);

// Per-term count of streams containing the term. Partial counts from
// disjoint stream sets merge by addition.
class DfCounter {
 public:
  void add(const std::vector<std::string>& tokens);
  void merge(const DfCounter& other);
  std::uint32_t df(const std::string& term) const;
  std::size_t n_docs() const { return n_docs_; }
  const std::unordered_map<std::string, std::uint32_t>& counts() const { return df_; }

 private:
  std::unordered_map<std::string, std::uint32_t> df_;
  std::size_t n_docs_ = 0;
};

struct PruneReport {
  std::set<std::string> removed_terms;
  std::uint32_t min_df = 1;
};

struct PruneResult {
  std::vector<TokenStream> streams;
  PruneReport report;
};

// Drops every term with document frequency below min_df (>= 1).
PruneResult prune_rare(std::vector<TokenStream> streams, std::uint32_t min_df);

}  // namespace simvec
