#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simvec/corpus.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/stores.hpp"
#include "simvec/tfidf.hpp"

namespace simvec {

enum class NegativeStrategy { kGiven, kSameSubclass, kSameClass, kRandom };

NegativeStrategy parse_strategy(std::string_view name);
std::string_view strategy_name(NegativeStrategy s);

using IdPair = std::pair<std::string, std::string>;

struct LabeledPair {
  std::string a;
  std::string b;
  bool positive = false;
  bool operator==(const LabeledPair&) const = default;
};

struct PairBenchmark {
  std::vector<LabeledPair> pairs;
  NegativeStrategy strategy = NegativeStrategy::kRandom;
};

// Positive pairs file: "id_a<TAB>id_b" per line; blank lines and lines
// starting with '#' are ignored.
std::vector<IdPair> read_pairs(std::istream& in);
std::vector<IdPair> read_pairs(const std::string& path);
void write_pairs(std::span<const IdPair> pairs, std::ostream& out);

// Samples n pairs with replacement, uniformly among the unordered pairs that
// satisfy the strategy. Pairs present in `exclude` (either order) are
// redrawn. Throws for kGiven or when no admissible pair exists.
std::vector<IdPair> build_negatives(const Corpus& corpus, std::size_t n,
                                    NegativeStrategy strategy, std::uint64_t seed,
                                    std::span<const IdPair> exclude = {});

// Checks every id exists and no pair is a self-pair.
PairBenchmark make_benchmark(const Corpus& corpus, std::span<const IdPair> positives,
                             std::span<const IdPair> negatives, NegativeStrategy strategy);

struct PairScores {
  std::vector<double> scores;
  std::size_t zero_norm = 0;  // pairs where a vector had zero norm
};

PairScores score_pairs(const VectorStore& store, std::span<const LabeledPair> pairs);

// Incremental TFIDF with IDF replacement: both documents of a pair are
// weighted with the timeline snapshot at the month of the earlier one.
struct IdfReplacement {
  const Corpus& corpus;
  std::span<const TokenStream> streams;
  const Vocabulary& vocab;
  const DfTimeline& timeline;
};

PairScores score_pairs(const IdfReplacement& ctx, std::span<const LabeledPair> pairs);

struct RocResult {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr)
  double auc = 0.0;
};

// labels: nonzero = positive.
RocResult roc_auc(std::span<const int> labels, std::span<const double> scores);
RocResult roc_auc(std::span<const LabeledPair> pairs, std::span<const double> scores);

void write_roc_csv(const RocResult& roc, std::ostream& out);
void write_roc_csv(const RocResult& roc, const std::string& path);

}  // namespace simvec
