#pragma once

// Synthetic corpora with known structure, used for qualitative checks of the
// full pipeline.

#include <cstdint>
#include <string>
#include <vector>

#include "simvec/corpus.hpp"
#include "simvec/eval.hpp"

namespace simvec {

struct HierarchyOptions {
  int classes = 8;
  int subclasses = 4;            // per class
  int docs_per_subclass = 50;    // near-duplicates included
  int duplicates_per_subclass = 10;
  int doc_length = 40;
  int global_vocab = 3000;
  int class_vocab = 40;          // per class
  int subclass_vocab = 40;       // per subclass
  double p_subclass = 0.2;       // token drawn from the subclass vocabulary
  double p_class = 0.5;         // ... from the class vocabulary, else global
  double keep_min = 0.0;         // near-duplicate keeps each token with a
  double keep_max = 0.25;        // probability drawn from [keep_min, keep_max]
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<IdPair> positives;
};

// Pseudo-words that survive clean_text unchanged (fixed points of the
// stemmer, not stopwords, distinct).
std::vector<std::string> pseudo_words(std::size_t n, std::uint64_t seed);

SyntheticCorpus make_hierarchical_corpus(const HierarchyOptions& options = {});

// Two classes with disjoint vocabularies; positives are near-duplicates.
SyntheticCorpus make_two_cluster_corpus(std::uint64_t seed, int docs_per_cluster = 60);

}  // namespace simvec
