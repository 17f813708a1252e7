#pragma once

#include <string>
#include <vector>

#include "simvec/config.hpp"
#include "simvec/corpus.hpp"
#include "simvec/error.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/stores.hpp"

namespace simvec {

// An error raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs fn, rethrowing any std::exception as a StageError for `stage`.
template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::vector<TokenStream> preprocess_corpus(const Corpus& corpus, Field field,
                                           const StopwordSet& stopwords,
                                           const CleanOptions& options = {});

std::vector<DocPhrases> corpus_phrases(const Corpus& corpus, Field field, std::size_t max_len);

// Appends each document's phrases among the top_k most frequent ones.
std::vector<TokenStream> add_top_phrases(std::vector<TokenStream> streams,
                                         std::span<const DocPhrases> phrases, std::size_t top_k);

VectorStore tfidf_store(std::span<const TokenStream> streams, const Vocabulary& vocab);

struct SummaryRecord {
  std::string method;
  std::string field;
  std::string strategy;
  double auc = 0.0;
  double wall_seconds = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t zero_norm_pairs = 0;

  // "method,field,strategy,auc" with the AUC in shortest round-trip form.
  std::string line() const;
};

// Full pipeline. Intermediate stores, the ROC curve and the summary line are
// written under config.output.
SummaryRecord run_experiment(const RunConfig& config);

}  // namespace simvec
