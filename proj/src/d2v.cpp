#include "simvec/d2v.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <thread>

#include "simvec/error.hpp"
#include "simvec/kernels.hpp"

namespace simvec {

double subsample_discard_prob(double f_w, double t) {
  return std::max(0.0, 1.0 - std::sqrt(t / f_w));
}

bool subsample_drop(double discard_prob, Rng& rng) {
  return discard_prob > 0.0 && rng.uniform() < discard_prob;
}

// ---------------------------------------------------------------------------
// Vocabulary

EmbeddingVocab EmbeddingVocab::build(std::span<const TokenStream> streams) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& s : streams)
    for (const auto& t : s.tokens) ++counts[t];
  return from_counts({counts.begin(), counts.end()});
}

EmbeddingVocab EmbeddingVocab::from_counts(
    std::vector<std::pair<std::string, std::uint64_t>> counts) {
  std::erase_if(counts, [](const auto& p) { return p.second == 0; });
  if (counts.size() < 2) throw Error("embedding vocabulary needs at least 2 distinct words");
  std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  EmbeddingVocab v;
  for (auto& [term, c] : counts) {
    v.index_.emplace(term, static_cast<std::uint32_t>(v.terms_.size()));
    v.terms_.push_back(std::move(term));
    v.counts_.push_back(c);
    v.total_ += c;
  }
  v.build_huffman();
  v.build_noise();
  return v;
}

std::optional<std::uint32_t> EmbeddingVocab::index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingVocab::build_huffman() {
  const std::size_t w = terms_.size();
  // Nodes 0..w-1 are leaves, w..2w-2 inner nodes (inner row = id - w).
  std::vector<std::uint64_t> weight(2 * w - 1, 0);
  std::vector<std::uint32_t> parent(2 * w - 1, 0);
  std::vector<std::uint8_t> bit(2 * w - 1, 0);
  for (std::size_t i = 0; i < w; ++i) weight[i] = counts_[i];
  using Item = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::uint32_t i = 0; i < w; ++i) heap.emplace(weight[i], i);
  for (std::uint32_t next = static_cast<std::uint32_t>(w); next < 2 * w - 1; ++next) {
    auto [w1, a] = heap.top();
    heap.pop();
    auto [w2, b] = heap.top();
    heap.pop();
    weight[next] = w1 + w2;
    parent[a] = parent[b] = next;
    bit[a] = 0;
    bit[b] = 1;
    heap.emplace(weight[next], next);
  }
  const std::uint32_t root = static_cast<std::uint32_t>(2 * w - 2);
  codes_.assign(w, {});
  paths_.assign(w, {});
  for (std::uint32_t leaf = 0; leaf < w; ++leaf) {
    std::vector<std::uint8_t> code;
    std::vector<std::uint32_t> path;
    for (std::uint32_t node = leaf; node != root; node = parent[node]) {
      code.push_back(bit[node]);
      path.push_back(parent[node] - static_cast<std::uint32_t>(w));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
    codes_[leaf] = std::move(code);
    paths_[leaf] = std::move(path);
  }
}

void EmbeddingVocab::build_noise() {
  noise_cdf_.resize(terms_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    total += std::pow(static_cast<double>(counts_[i]), 0.75);
    noise_cdf_[i] = total;
  }
  for (double& c : noise_cdf_) c /= total;
  noise_cdf_.back() = 1.0;
}

std::uint32_t EmbeddingVocab::sample_noise(Rng& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), u);
  if (it == noise_cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - noise_cdf_.begin());
}

// ---------------------------------------------------------------------------
// Parameters and model

void TrainParams::validate() const {
  auto fail = [](const std::string& what) { throw Error("train params: " + what); };
  if (dm != 0 && dm != 1) fail("dm must be 0 or 1");
  if (hs != 0 && hs != 1) fail("hs must be 0 or 1");
  if (size < 1) fail("size must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (!(sample > 0.0 && sample <= 1.0)) fail("sample must be in (0, 1]");
  if (iter < 1) fail("iter must be >= 1");
  if (hs == 0 && negative < 1) fail("negative must be >= 1 when hs=0");
  if (!(alpha0 > 0.0)) fail("alpha0 must be positive");
  if (workers < 1) fail("workers must be >= 1");
}

std::optional<std::size_t> EmbeddingModel::doc_index(const std::string& id) const {
  auto it = std::find(doc_ids.begin(), doc_ids.end(), id);
  if (it == doc_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - doc_ids.begin());
}

DenseVector EmbeddingModel::doc_vector(std::size_t i) const {
  auto r = doc_in.row(i);
  return DenseVector(std::vector<double>(r.begin(), r.end()));
}

DenseVector EmbeddingModel::word_vector(std::uint32_t i) const {
  auto r = word_in.row(i);
  return DenseVector(std::vector<double>(r.begin(), r.end()));
}

// ---------------------------------------------------------------------------
// Output layer

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x))
double neg_log_sigmoid(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

double term_loss(double f, double label) {
  return label > 0.5 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
}

// Shared forward pass: hidden vector and, per output, the coefficient
// label - sigmoid(v . h), which is -dL/df. Returns the loss.
struct Forward {
  std::vector<double> h;
  std::vector<double> coef;
};

double forward(std::span<const double* const> inputs, const Matrix& out,
               std::span<const OutputTerm> outputs, std::size_t size, Forward& fw) {
  fw.h.assign(size, 0.0);
  for (const double* row : inputs) kernels::axpy(1.0, {row, size}, fw.h);
  kernels::scale(1.0 / static_cast<double>(inputs.size()), fw.h);
  fw.coef.resize(outputs.size());
  double loss = 0.0;
  for (std::size_t j = 0; j < outputs.size(); ++j) {
    double f = kernels::dot(fw.h, out.row(outputs[j].row));
    fw.coef[j] = outputs[j].label - sigmoid(f);
    loss += term_loss(f, outputs[j].label);
  }
  return loss;
}

// Gathers input row pointers for an example.
void collect_inputs(const EmbeddingModel& model, const Example& ex,
                    std::vector<const double*>& rows) {
  rows.clear();
  for (auto c : ex.context_words) rows.push_back(model.word_in.row(c).data());
  if (ex.doc) rows.push_back(model.doc_in.row(*ex.doc).data());
}

// SGD step. `writable` holds, per input, the row to update or nullptr when
// the input is frozen. All gradient terms are evaluated at the pre-step
// parameters before anything is written.
double sgd_step(std::span<const double* const> inputs, std::span<double* const> writable,
                Matrix& out, bool freeze_outputs, std::span<const OutputTerm> outputs,
                double alpha, std::size_t size) {
  thread_local Forward fw;
  thread_local std::vector<double> neu1e;
  double loss = forward(inputs, out, outputs, size, fw);
  neu1e.assign(size, 0.0);
  for (std::size_t j = 0; j < outputs.size(); ++j)
    kernels::axpy(fw.coef[j], out.row(outputs[j].row), neu1e);
  if (!freeze_outputs)
    for (std::size_t j = 0; j < outputs.size(); ++j)
      kernels::axpy(alpha * fw.coef[j], fw.h, out.row(outputs[j].row));
  // Each input takes the full hidden-layer error rather than its 1/count
  // share, as the reference trainers do for mean-combined inputs.
  for (double* row : writable)
    if (row != nullptr) kernels::axpy(alpha, neu1e, {row, size});
  return loss;
}

}  // namespace

std::vector<OutputTerm> output_terms(const EmbeddingVocab& vocab, std::uint32_t target,
                                     const TrainParams& params, Rng& rng) {
  std::vector<OutputTerm> out;
  if (params.hs == 1) {
    const auto& code = vocab.code(target);
    const auto& path = vocab.path(target);
    out.reserve(code.size());
    for (std::size_t d = 0; d < code.size(); ++d)
      out.push_back({path[d], 1.0 - static_cast<double>(code[d])});
  } else {
    out.reserve(static_cast<std::size_t>(params.negative) + 1);
    out.push_back({target, 1.0});
    for (int n = 0; n < params.negative; ++n) {
      std::uint32_t w = vocab.sample_noise(rng);
      if (w != target) out.push_back({w, 0.0});
    }
  }
  return out;
}

ExampleGradient example_gradient(const EmbeddingModel& model, const Example& example) {
  const auto size = static_cast<std::size_t>(model.params.size);
  std::vector<const double*> rows;
  collect_inputs(model, example, rows);
  if (rows.empty()) throw Error("example has no inputs");
  Forward fw;
  ExampleGradient g;
  g.loss = forward(rows, model.word_out, example.outputs, size, fw);
  g.hidden.assign(size, 0.0);
  g.outputs.reserve(example.outputs.size());
  for (std::size_t j = 0; j < example.outputs.size(); ++j) {
    kernels::axpy(-fw.coef[j], model.word_out.row(example.outputs[j].row), g.hidden);
    std::vector<double> dv(size, 0.0);
    kernels::axpy(-fw.coef[j], fw.h, dv);
    g.outputs.push_back(std::move(dv));
  }
  return g;
}

double apply_example(EmbeddingModel& model, const Example& example, double alpha,
                     bool freeze_outputs, bool freeze_words) {
  const auto size = static_cast<std::size_t>(model.params.size);
  std::vector<const double*> rows;
  collect_inputs(model, example, rows);
  if (rows.empty()) throw Error("example has no inputs");
  std::vector<double*> writable;
  writable.reserve(rows.size());
  for (auto c : example.context_words)
    writable.push_back(freeze_words ? nullptr : model.word_in.row(c).data());
  if (example.doc) writable.push_back(model.doc_in.row(*example.doc).data());
  return sgd_step(rows, writable, model.word_out, freeze_outputs, example.outputs, alpha, size);
}

double softmax_prob(const EmbeddingModel& model, std::uint32_t target, std::uint32_t context) {
  const std::size_t w = model.vocab.size();
  if (model.word_out.rows() != w)
    throw Error("softmax_prob needs one output vector per word (hs=0 model)");
  auto u = model.word_in.row(target);
  std::vector<double> logits(w);
  for (std::size_t i = 0; i < w; ++i) logits[i] = kernels::dot(model.word_out.row(i), u);
  const double shift = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double l : logits) denom += std::exp(l - shift);
  return std::exp(logits[context] - shift) / denom;
}

// ---------------------------------------------------------------------------
// Training

namespace {

void init_uniform(Matrix& m, Rng& rng) {
  const double half = 0.5 / static_cast<double>(m.cols());
  for (double& x : m.data()) x = (rng.uniform() - 0.5) * 2.0 * half;
}

std::vector<std::uint32_t> known_ids(const EmbeddingVocab& vocab,
                                     std::span<const std::string> tokens) {
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens)
    if (auto i = vocab.index(t)) ids.push_back(*i);
  return ids;
}

// Calls fn(example) for every prediction made at position `pos` of
// `sentence` with reduced window `b`.
template <typename Fn>
void for_each_example(const EmbeddingModel& model, const std::vector<std::uint32_t>& sentence,
                      std::size_t pos, std::size_t b, std::optional<std::uint32_t> doc,
                      Rng& rng, Fn&& fn) {
  const auto& p = model.params;
  const std::size_t lo = pos >= b ? pos - b : 0;
  const std::size_t hi = std::min(sentence.size() - 1, pos + b);
  Example ex;
  if (p.mode == EmbeddingMode::kDocument && p.dm == 0) {
    ex.doc = doc;
    ex.outputs = output_terms(model.vocab, sentence[pos], p, rng);
    fn(ex);
  } else if (p.dm == 1) {
    for (std::size_t c = lo; c <= hi; ++c)
      if (c != pos) ex.context_words.push_back(sentence[c]);
    if (p.mode == EmbeddingMode::kDocument) ex.doc = doc;
    if (ex.input_count() == 0) return;
    ex.outputs = output_terms(model.vocab, sentence[pos], p, rng);
    fn(ex);
  } else {
    // Skip-gram: the centre word predicts each context word.
    ex.context_words.push_back(sentence[pos]);
    for (std::size_t c = lo; c <= hi; ++c) {
      if (c == pos) continue;
      ex.outputs = output_terms(model.vocab, sentence[c], p, rng);
      fn(ex);
    }
  }
}

struct SharedProgress {
  std::atomic<std::uint64_t> words{0};
  std::uint64_t total = 1;
};

double learning_rate(const TrainParams& p, std::uint64_t done, std::uint64_t total) {
  double progress = static_cast<double>(done) / static_cast<double>(total + 1);
  return p.alpha0 * std::max(1e-4, 1.0 - progress);
}

// Trains over documents [begin, end) for one epoch.
void train_range(EmbeddingModel& model, const std::vector<std::vector<std::uint32_t>>& docs,
                 const std::vector<double>& discard, std::size_t begin, std::size_t end,
                 SharedProgress& progress, Rng& rng) {
  const auto& p = model.params;
  const bool doc_mode = p.mode == EmbeddingMode::kDocument;
  std::vector<std::uint32_t> sentence;
  std::vector<std::uint32_t> offset;
  for (std::size_t d = begin; d < end; ++d) {
    const auto& ids = docs[d];
    sentence.clear();
    offset.clear();
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      if (subsample_drop(discard[ids[i]], rng)) continue;
      sentence.push_back(ids[i]);
      offset.push_back(i);
    }
    const std::uint64_t base = progress.words.load(std::memory_order_relaxed);
    for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
      const double alpha = learning_rate(p, base + offset[pos], progress.total);
      const std::size_t b = 1 + rng.below(static_cast<std::uint64_t>(p.window));
      std::optional<std::uint32_t> doc;
      if (doc_mode) doc = static_cast<std::uint32_t>(d);
      for_each_example(model, sentence, pos, b, doc, rng,
                       [&](const Example& ex) { apply_example(model, ex, alpha); });
    }
    progress.words.fetch_add(ids.size(), std::memory_order_relaxed);
  }
}

}  // namespace

EmbeddingModel train(std::span<const TokenStream> streams, const TrainParams& params,
                     const EpochCallback& on_epoch_end) {
  params.validate();
  if (streams.empty()) throw Error("train: empty corpus");
  EmbeddingModel model;
  model.params = params;
  model.vocab = EmbeddingVocab::build(streams);
  const auto size = static_cast<std::size_t>(params.size);
  const std::size_t w = model.vocab.size();

  Rng rng(params.seed);
  model.word_in = Matrix(w, size);
  init_uniform(model.word_in, rng);
  model.word_out = Matrix(params.hs == 1 ? w - 1 : w, size);
  if (params.mode == EmbeddingMode::kDocument) {
    model.doc_in = Matrix(streams.size(), size);
    init_uniform(model.doc_in, rng);
    model.doc_ids.reserve(streams.size());
    for (const auto& s : streams) model.doc_ids.push_back(s.doc_id);
  }

  std::vector<std::vector<std::uint32_t>> docs;
  docs.reserve(streams.size());
  std::uint64_t total_words = 0;
  for (const auto& s : streams) {
    docs.push_back(known_ids(model.vocab, s.tokens));
    total_words += docs.back().size();
  }
  std::vector<double> discard(w);
  for (std::uint32_t i = 0; i < w; ++i)
    discard[i] = subsample_discard_prob(
        static_cast<double>(model.vocab.count(i)) / static_cast<double>(model.vocab.total()),
        params.sample);

  SharedProgress progress;
  progress.total = total_words * static_cast<std::uint64_t>(params.iter);
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(
      static_cast<std::size_t>(params.workers), docs.size()));
  std::vector<Rng> worker_rng;
  for (std::size_t t = 0; t < workers; ++t)
    worker_rng.emplace_back(t == 0 ? rng.next() : derive_seed(params.seed, "worker" + std::to_string(t)));

  for (int epoch = 0; epoch < params.iter; ++epoch) {
    if (workers <= 1) {
      train_range(model, docs, discard, 0, docs.size(), progress, worker_rng[0]);
    } else {
      // Workers update shared rows without locks, as in the reference
      // word2vec trainer; results depend on scheduling.
      std::vector<std::thread> pool;
      const std::size_t chunk = (docs.size() + workers - 1) / workers;
      for (std::size_t t = 0; t < workers; ++t) {
        std::size_t b = t * chunk, e = std::min(docs.size(), b + chunk);
        pool.emplace_back([&, b, e, t] {
          train_range(model, docs, discard, b, e, progress, worker_rng[t]);
        });
      }
      for (auto& th : pool) th.join();
    }
    if (on_epoch_end) on_epoch_end(epoch, model);
  }
  return model;
}

double mean_loss(const EmbeddingModel& model, std::span<const TokenStream> streams,
                 std::uint64_t seed) {
  Rng rng(seed);
  const auto size = static_cast<std::size_t>(model.params.size);
  const bool doc_mode = model.params.mode == EmbeddingMode::kDocument;
  Forward fw;
  std::vector<const double*> rows;
  double total = 0.0;
  std::uint64_t n = 0;
  for (std::size_t d = 0; d < streams.size(); ++d) {
    auto sentence = known_ids(model.vocab, streams[d].tokens);
    std::optional<std::uint32_t> doc;
    if (doc_mode) {
      auto idx = model.doc_index(streams[d].doc_id);
      if (!idx) throw Error("mean_loss: unknown document '" + streams[d].doc_id + "'");
      doc = static_cast<std::uint32_t>(*idx);
    }
    for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
      const std::size_t b = 1 + rng.below(static_cast<std::uint64_t>(model.params.window));
      for_each_example(model, sentence, pos, b, doc, rng, [&](const Example& ex) {
        collect_inputs(model, ex, rows);
        total += forward(rows, model.word_out, ex.outputs, size, fw);
        ++n;
      });
    }
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

DenseVector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                         std::optional<int> epochs) {
  if (model.params.mode != EmbeddingMode::kDocument)
    throw Error("infer_vector needs a document model");
  auto sentence = known_ids(model.vocab, tokens);
  if (sentence.empty()) throw Error("infer_vector: no known tokens");
  const auto& p = model.params;
  const auto size = static_cast<std::size_t>(p.size);
  const int n_epochs = epochs.value_or(p.iter);

  Rng rng(derive_seed(p.seed, "infer"));
  Matrix doc(1, size);
  init_uniform(doc, rng);
  // Output rows stay frozen; sgd_step only reads them.
  Matrix& out = const_cast<Matrix&>(model.word_out);

  const std::uint64_t total = sentence.size() * static_cast<std::uint64_t>(n_epochs);
  std::uint64_t done = 0;
  std::vector<const double*> rows;
  std::vector<double*> writable;
  for (int e = 0; e < n_epochs; ++e) {
    for (std::size_t pos = 0; pos < sentence.size(); ++pos, ++done) {
      const double alpha = learning_rate(p, done, total);
      const std::size_t b = 1 + rng.below(static_cast<std::uint64_t>(p.window));
      for_each_example(model, sentence, pos, b, 0u, rng, [&](const Example& ex) {
        rows.clear();
        writable.clear();
        for (auto c : ex.context_words) {
          rows.push_back(model.word_in.row(c).data());
          writable.push_back(nullptr);
        }
        rows.push_back(doc.row(0).data());
        writable.push_back(doc.row(0).data());
        sgd_step(rows, writable, out, /*freeze_outputs=*/true, ex.outputs, alpha, size);
      });
    }
  }
  auto r = doc.row(0);
  return DenseVector(std::vector<double>(r.begin(), r.end()));
}

DenseVector average_word_vectors(const EmbeddingModel& model,
                                 std::span<const std::string> tokens,
                                 AverageWeighting weighting, const Vocabulary* tfidf_vocab) {
  if (weighting == AverageWeighting::kTfidf && tfidf_vocab == nullptr)
    throw Error("average_word_vectors: tfidf weighting needs a vocabulary");
  const auto size = static_cast<std::size_t>(model.params.size);
  std::unordered_map<std::uint32_t, std::uint32_t> tf;
  for (const auto& t : tokens)
    if (auto i = model.vocab.index(t)) ++tf[*i];
  if (tf.empty()) throw Error("average_word_vectors: no known tokens");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> ordered(tf.begin(), tf.end());
  std::sort(ordered.begin(), ordered.end());
  DenseVector out(size);
  double total = 0.0;
  for (auto [word, count] : ordered) {
    double w = count;
    if (weighting == AverageWeighting::kTfidf) {
      auto ti = tfidf_vocab->index(model.vocab.term(word));
      w = ti ? tfidf_weight(count, tfidf_vocab->n_docs(), tfidf_vocab->df(*ti)) : 0.0;
    }
    if (w == 0.0) continue;
    kernels::axpy(w, model.word_in.row(word), out.view());
    total += w;
  }
  if (total != 0.0) kernels::scale(1.0 / total, out.view());
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr char kMagic[6] = {'S', 'V', 'D', '2', 'V', '\0'};
constexpr std::uint8_t kD2vVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("embedding model: truncated file");
  return v;
}
void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string get_string(std::istream& in) {
  auto n = get<std::uint32_t>(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw Error("embedding model: truncated file");
  return s;
}
void put_matrix(std::ostream& out, const Matrix& m) {
  put<std::uint64_t>(out, m.rows());
  put<std::uint64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data().data()),
            static_cast<std::streamsize>(m.data().size() * sizeof(double)));
}
Matrix get_matrix(std::istream& in) {
  auto r = get<std::uint64_t>(in);
  auto c = get<std::uint64_t>(in);
  Matrix m(r, c);
  in.read(reinterpret_cast<char*>(m.data().data()),
          static_cast<std::streamsize>(m.data().size() * sizeof(double)));
  if (!in) throw Error("embedding model: truncated file");
  return m;
}

}  // namespace

void EmbeddingModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put(out, kD2vVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(params.mode));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(params.dm));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(params.hs));
  put<std::int32_t>(out, params.size);
  put<std::int32_t>(out, params.window);
  put<double>(out, params.sample);
  put<std::int32_t>(out, params.iter);
  put<std::int32_t>(out, params.negative);
  put<double>(out, params.alpha0);
  put<std::uint64_t>(out, params.seed);
  put<std::uint64_t>(out, vocab.size());
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    put_string(out, vocab.term(i));
    put<std::uint64_t>(out, vocab.count(i));
  }
  put<std::uint64_t>(out, doc_ids.size());
  for (const auto& id : doc_ids) put_string(out, id);
  put_matrix(out, word_in);
  put_matrix(out, word_out);
  put_matrix(out, doc_in);
  if (!out) throw Error("embedding model: write failed");
}

void EmbeddingModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write embedding model '" + path + "'");
  save(out);
}

EmbeddingModel EmbeddingModel::load(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error("embedding model: bad magic");
  auto version = get<std::uint8_t>(in);
  if (version != kD2vVersion)
    throw Error("embedding model: unsupported version " + std::to_string(version));
  EmbeddingModel m;
  m.params.mode = static_cast<EmbeddingMode>(get<std::uint8_t>(in));
  m.params.dm = get<std::uint8_t>(in);
  m.params.hs = get<std::uint8_t>(in);
  m.params.size = get<std::int32_t>(in);
  m.params.window = get<std::int32_t>(in);
  m.params.sample = get<double>(in);
  m.params.iter = get<std::int32_t>(in);
  m.params.negative = get<std::int32_t>(in);
  m.params.alpha0 = get<double>(in);
  m.params.seed = get<std::uint64_t>(in);
  auto n_words = get<std::uint64_t>(in);
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  counts.reserve(n_words);
  for (std::uint64_t i = 0; i < n_words; ++i) {
    auto term = get_string(in);
    auto c = get<std::uint64_t>(in);
    counts.emplace_back(std::move(term), c);
  }
  m.vocab = EmbeddingVocab::from_counts(std::move(counts));
  auto n_docs = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n_docs; ++i) m.doc_ids.push_back(get_string(in));
  m.word_in = get_matrix(in);
  m.word_out = get_matrix(in);
  m.doc_in = get_matrix(in);
  return m;
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read embedding model '" + path + "'");
  return load(in);
}

}  // namespace simvec
