#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "simvec/preprocess.hpp"
#include "simvec/rng.hpp"
#include "simvec/tfidf.hpp"
#include "simvec/vectors.hpp"

namespace simvec {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Probability of dropping a word of relative frequency f_w under threshold t:
// max(0, 1 - sqrt(t / f_w)).
double subsample_discard_prob(double f_w, double t);

// One subsampling decision as taken during training.
bool subsample_drop(double discard_prob, Rng& rng);

// Vocabulary for embedding training: terms ordered by descending count
// (ties lexicographic), Huffman codes for the hierarchical softmax and the
// unigram^0.75 noise distribution for negative sampling.
class EmbeddingVocab {
 public:
  EmbeddingVocab() = default;
  // Throws simvec::Error when fewer than two distinct words occur.
  static EmbeddingVocab build(std::span<const TokenStream> streams);
  static EmbeddingVocab from_counts(std::vector<std::pair<std::string, std::uint64_t>> counts);

  std::size_t size() const { return terms_.size(); }
  std::uint64_t total() const { return total_; }
  std::optional<std::uint32_t> index(const std::string& term) const;
  const std::string& term(std::uint32_t i) const { return terms_[i]; }
  std::uint64_t count(std::uint32_t i) const { return counts_[i]; }

  // Huffman code bits (root to leaf) and the inner nodes visited on the way.
  const std::vector<std::uint8_t>& code(std::uint32_t i) const { return codes_[i]; }
  const std::vector<std::uint32_t>& path(std::uint32_t i) const { return paths_[i]; }

  // Cumulative noise distribution; last entry is 1.
  const std::vector<double>& noise_cdf() const { return noise_cdf_; }
  std::uint32_t sample_noise(Rng& rng) const;

 private:
  void build_huffman();
  void build_noise();

  std::vector<std::string> terms_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t total_ = 0;
  std::vector<std::vector<std::uint8_t>> codes_;
  std::vector<std::vector<std::uint32_t>> paths_;
  std::vector<double> noise_cdf_;
};

enum class EmbeddingMode : std::uint8_t {
  kDocument,  // D2V: dm=1 distributed memory, dm=0 distributed bag of words
  kWord,      // W2V: dm=1 CBOW, dm=0 skip-gram
};

struct TrainParams {
  EmbeddingMode mode = EmbeddingMode::kDocument;
  int dm = 1;
  int hs = 0;
  int size = 100;
  int window = 5;
  double sample = 1e-3;
  int iter = 5;
  int negative = 5;
  double alpha0 = 0.025;
  std::uint64_t seed = 1;
  // More than one worker trains with unsynchronized updates and is not
  // reproducible.
  int workers = 1;

  // Throws simvec::Error describing the first violated constraint.
  void validate() const;
  bool operator==(const TrainParams&) const = default;
};

struct EmbeddingModel {
  TrainParams params;
  EmbeddingVocab vocab;
  Matrix word_in;   // W x size
  Matrix word_out;  // inner nodes (hs) or words (negative sampling) x size
  Matrix doc_in;    // documents x size; empty in word mode
  std::vector<std::string> doc_ids;

  std::optional<std::size_t> doc_index(const std::string& id) const;
  DenseVector doc_vector(std::size_t i) const;
  DenseVector word_vector(std::uint32_t i) const;

  // Binary format: magic, version byte, flags, dimensions, vocabulary
  // table, document ids, then word_in, word_out, doc_in as native doubles.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static EmbeddingModel load(std::istream& in);
  static EmbeddingModel load(const std::string& path);
};

// One binary classifier of the output layer: label 1 for the observed word
// or a Huffman branch with code 0, label 0 for noise words or code 1.
struct OutputTerm {
  std::uint32_t row;
  double label;
};

// A single prediction: the hidden vector is the mean of the listed input
// rows (word_in rows, then the doc_in row if present).
struct Example {
  std::vector<std::uint32_t> context_words;
  std::optional<std::uint32_t> doc;
  std::vector<OutputTerm> outputs;

  std::size_t input_count() const { return context_words.size() + (doc ? 1 : 0); }
};

// Output classifiers for predicting `target`: its Huffman path, or the
// target plus `negative` noise draws (draws equal to the target skipped).
std::vector<OutputTerm> output_terms(const EmbeddingVocab& vocab, std::uint32_t target,
                                     const TrainParams& params, Rng& rng);

struct ExampleGradient {
  double loss = 0.0;
  // dL/dh; every input row receives hidden / input_count.
  std::vector<double> hidden;
  // dL/dv for outputs[j], in order.
  std::vector<std::vector<double>> outputs;
};

// Negative log-likelihood of one example and its analytic gradient.
ExampleGradient example_gradient(const EmbeddingModel& model, const Example& example);

// One SGD step of size alpha on the example, as train() takes it: outputs
// move along -alpha * dL/dv, every input row along -alpha * dL/dh (the
// mean's gradient scaled by the input count). Returns the pre-step loss.
// Output rows are updated unless `freeze_outputs`; word inputs unless
// `freeze_words`.
double apply_example(EmbeddingModel& model, const Example& example, double alpha,
                     bool freeze_outputs = false, bool freeze_words = false);

// Full-softmax probability of `context` given `target`, max-shifted. Needs
// one output row per word (negative-sampling layout); throws simvec::Error
// for a hierarchical-softmax model.
double softmax_prob(const EmbeddingModel& model, std::uint32_t target, std::uint32_t context);

using EpochCallback = std::function<void(int epoch, const EmbeddingModel&)>;

// SGD training; in document mode one doc vector per stream, keyed by
// doc_id. Deterministic for a fixed seed when workers == 1.
EmbeddingModel train(std::span<const TokenStream> streams, const TrainParams& params,
                     const EpochCallback& on_epoch_end = {});

// Mean per-example loss over the corpus with parameters frozen, using a
// fixed window/negative-sample stream drawn from `seed`. No subsampling.
double mean_loss(const EmbeddingModel& model, std::span<const TokenStream> streams,
                 std::uint64_t seed);

// Fits a fresh doc vector for `tokens` with the trained word and output
// layers frozen. Throws simvec::Error when no token is known or the model
// is not a document model.
DenseVector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                         std::optional<int> epochs = std::nullopt);

enum class AverageWeighting { kUniform, kTfidf };

// Weighted mean of word_in vectors over known tokens. Tfidf weighting uses
// TF*IDF from `tfidf_vocab`; a zero total weight gives the zero vector.
// Throws simvec::Error when no token is known.
DenseVector average_word_vectors(const EmbeddingModel& model,
                                 std::span<const std::string> tokens,
                                 AverageWeighting weighting,
                                 const Vocabulary* tfidf_vocab = nullptr);

}  // namespace simvec
