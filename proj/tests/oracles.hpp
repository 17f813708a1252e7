#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. Each is deliberately naive.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "simvec/d2v.hpp"
#include "simvec/phrases.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/rng.hpp"

namespace oracle {

// Recounts TF and DF from scratch; returns term -> weight for one document.
inline std::map<std::string, double> tfidf(const std::vector<simvec::TokenStream>& streams,
                                           std::size_t doc) {
  std::map<std::string, double> out;
  const double n = static_cast<double>(streams.size());
  std::set<std::string> terms(streams[doc].tokens.begin(), streams[doc].tokens.end());
  for (const auto& t : terms) {
    double tf = 0.0, df = 0.0;
    for (const auto& tok : streams[doc].tokens) tf += tok == t;
    for (const auto& s : streams)
      df += std::find(s.tokens.begin(), s.tokens.end(), t) != s.tokens.end();
    const double w = tf * std::log((n + 1.0) / (df + 1.0));
    if (w != 0.0) out[t] = w;
  }
  return out;
}

inline char letter(simvec::Tag t) { return simvec::tag_letter(t); }

// Regular-expression reading of the noun-phrase grammar over tag letters.
inline bool grammar_accepts(const std::string& tags) {
  static const std::regex re("[AN]*N(PD*[AN]*N)*");
  return std::regex_match(tags, re);
}

inline std::string tags_to_string(const std::vector<simvec::Tag>& tags) {
  std::string s;
  for (auto t : tags) s += letter(t);
  return s;
}

// Fraction of positive/negative pairs ordered correctly, ties counting 1/2.
inline double pairwise_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0, total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      total += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / total;
}

// Minimum total weighted code length over all complete prefix codes, by
// enumerating nondecreasing codeword-length sequences that satisfy Kraft's
// equality and pairing the shortest codes with the heaviest weights.
inline double optimal_code_cost(std::vector<double> weights) {
  std::sort(weights.begin(), weights.end(), std::greater<>());
  const int n = static_cast<int>(weights.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> len(static_cast<std::size_t>(n));
  // kraft in units of 2^-(n-1), exact in integer arithmetic.
  const long long unit = 1LL << (n - 1);
  std::function<void(int, int, long long, double)> rec = [&](int i, int min_len, long long kraft,
                                                             double cost) {
    if (cost >= best) return;
    if (i == n) {
      if (kraft == unit) best = cost;
      return;
    }
    for (int l = std::max(min_len, 1); l <= n - 1; ++l) {
      const long long add = 1LL << (n - 1 - l);
      // Remaining codes are at least as long, so each adds <= add.
      if (kraft + add > unit) continue;
      if (kraft + add * (n - i) < unit) break;  // even all at l cannot fill
      rec(i + 1, l, kraft + add, cost + weights[static_cast<std::size_t>(i)] * l);
    }
  };
  rec(0, 1, 0, 0.0);
  return best;
}

// Per-example loss as a function of the parameters it touches; the gradient
// is checked by central differences on a copy of the model.
inline double example_loss(const simvec::EmbeddingModel& model, const simvec::Example& ex) {
  const auto size = static_cast<std::size_t>(model.params.size);
  std::vector<double> h(size, 0.0);
  double count = 0.0;
  for (auto c : ex.context_words) {
    for (std::size_t k = 0; k < size; ++k) h[k] += model.word_in.row(c)[k];
    count += 1.0;
  }
  if (ex.doc) {
    for (std::size_t k = 0; k < size; ++k) h[k] += model.doc_in.row(*ex.doc)[k];
    count += 1.0;
  }
  for (double& x : h) x /= count;
  double loss = 0.0;
  for (const auto& o : ex.outputs) {
    double f = 0.0;
    for (std::size_t k = 0; k < size; ++k) f += h[k] * model.word_out.row(o.row)[k];
    const double sign = o.label > 0.5 ? 1.0 : -1.0;
    loss += std::log1p(std::exp(-sign * f));
  }
  return loss;
}

// Model with every parameter drawn uniformly from [-scale, scale], so that
// gradient checks see non-degenerate output rows.
inline simvec::EmbeddingModel random_model(const simvec::EmbeddingVocab& vocab,
                                           const simvec::TrainParams& params, std::size_t docs,
                                           simvec::Rng& rng, double scale = 0.5) {
  simvec::EmbeddingModel m;
  m.params = params;
  m.vocab = vocab;
  const auto size = static_cast<std::size_t>(params.size);
  const std::size_t out_rows = params.hs ? vocab.size() - 1 : vocab.size();
  m.word_in = simvec::Matrix(vocab.size(), size);
  m.word_out = simvec::Matrix(out_rows, size);
  m.doc_in = simvec::Matrix(docs, size);
  for (auto* mat : {&m.word_in, &m.word_out, &m.doc_in})
    for (double& x : mat->data()) x = rng.uniform(-scale, scale);
  for (std::size_t d = 0; d < docs; ++d) m.doc_ids.push_back("d" + std::to_string(d));
  return m;
}

// Largest relative error between the analytic gradient and central
// differences, taken over the whole parameter block an example touches.
inline double gradient_check(const simvec::EmbeddingModel& model, const simvec::Example& ex,
                             double eps = 1e-4) {
  const auto grad = simvec::example_gradient(model, ex);
  const auto size = static_cast<std::size_t>(model.params.size);
  const double per_input = 1.0 / static_cast<double>(ex.input_count());
  std::vector<double> analytic, numeric;
  auto probe = [&](simvec::Matrix simvec::EmbeddingModel::*which, std::uint32_t row,
                   const std::vector<double>& expect, double factor) {
    for (std::size_t k = 0; k < size; ++k) {
      simvec::EmbeddingModel copy = model;
      double& x = (copy.*which).row(row)[k];
      const double x0 = x;
      x = x0 + eps;
      const double up = example_loss(copy, ex);
      x = x0 - eps;
      const double down = example_loss(copy, ex);
      numeric.push_back((up - down) / (2.0 * eps));
      analytic.push_back(expect[k] * factor);
    }
  };
  // Inputs are probed one distinct row at a time; repeated context words
  // accumulate their share.
  std::map<std::uint32_t, double> multiplicity;
  for (auto c : ex.context_words) multiplicity[c] += 1.0;
  for (auto [c, times] : multiplicity)
    probe(&simvec::EmbeddingModel::word_in, c, grad.hidden, per_input * times);
  if (ex.doc) probe(&simvec::EmbeddingModel::doc_in, *ex.doc, grad.hidden, per_input);
  std::map<std::uint32_t, std::vector<double>> out_grad;
  for (std::size_t j = 0; j < ex.outputs.size(); ++j) {
    auto& g = out_grad[ex.outputs[j].row];
    g.resize(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) g[k] += grad.outputs[j][k];
  }
  for (const auto& [row, g] : out_grad) probe(&simvec::EmbeddingModel::word_out, row, g, 1.0);

  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    scale += analytic[i] * analytic[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(scale), 1e-300);
}

// Branin-Hoo on x1 in [-5, 10], x2 in [0, 15]; global minimum 0.397887.
inline double branin(double x1, double x2) {
  const double pi = 3.14159265358979323846;
  const double b = 5.1 / (4.0 * pi * pi), c = 5.0 / pi, t = 1.0 / (8.0 * pi);
  const double q = x2 - b * x1 * x1 + c * x1 - 6.0;
  return q * q + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

}  // namespace oracle
