#include "simvec/eval.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "simvec/error.hpp"
#include "simvec/parallel.hpp"
#include "simvec/rng.hpp"

namespace simvec {

NegativeStrategy parse_strategy(std::string_view name) {
  if (name == "given") return NegativeStrategy::kGiven;
  if (name == "same-subclass" || name == "subclass") return NegativeStrategy::kSameSubclass;
  if (name == "same-class" || name == "class") return NegativeStrategy::kSameClass;
  if (name == "random") return NegativeStrategy::kRandom;
  throw Error("unknown negative strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(NegativeStrategy s) {
  switch (s) {
    case NegativeStrategy::kGiven: return "given";
    case NegativeStrategy::kSameSubclass: return "same-subclass";
    case NegativeStrategy::kSameClass: return "same-class";
    case NegativeStrategy::kRandom: return "random";
  }
  return "?";
}

std::vector<IdPair> read_pairs(std::istream& in) {
  std::vector<IdPair> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw Error("pairs line " + std::to_string(n) + ": expected 'id_a<TAB>id_b'");
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

std::vector<IdPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read pairs file '" + path + "'");
  return read_pairs(in);
}

void write_pairs(std::span<const IdPair> pairs, std::ostream& out) {
  for (const auto& [a, b] : pairs) out << a << '\t' << b << '\n';
}

namespace {

std::string unordered_key(const std::string& a, const std::string& b) {
  return a < b ? a + '\x1f' + b : b + '\x1f' + a;
}

}  // namespace

std::vector<IdPair> build_negatives(const Corpus& corpus, std::size_t n,
                                    NegativeStrategy strategy, std::uint64_t seed,
                                    std::span<const IdPair> exclude) {
  if (strategy == NegativeStrategy::kGiven)
    throw Error("negative strategy 'given' needs an explicit negatives file");
  if (corpus.size() < 2) throw Error("negative sampling needs at least 2 documents");

  // Groups of document positions sharing the constrained key.
  std::vector<std::vector<std::size_t>> groups;
  if (strategy == NegativeStrategy::kRandom) {
    groups.emplace_back(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) groups[0][i] = i;
  } else {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& d = corpus[i];
      std::string sub = strategy == NegativeStrategy::kSameSubclass ? d.subclass : "";
      by_key[{d.main_class, sub}].push_back(i);
    }
    for (auto& [key, members] : by_key)
      if (members.size() >= 2) groups.push_back(std::move(members));
    if (groups.empty())
      throw Error("no class with at least 2 members for strategy '" +
                  std::string(strategy_name(strategy)) + "'");
  }
  // Cumulative number of unordered pairs per group.
  std::vector<std::uint64_t> cumulative;
  std::uint64_t total = 0;
  for (const auto& g : groups) {
    total += static_cast<std::uint64_t>(g.size()) * (g.size() - 1) / 2;
    cumulative.push_back(total);
  }

  std::unordered_set<std::string> excluded;
  for (const auto& [a, b] : exclude) excluded.insert(unordered_key(a, b));
  if (excluded.size() >= total && !excluded.empty()) {
    // Cheap guard; an exact count would need intersecting with the groups.
    std::size_t admissible = 0;
    for (const auto& g : groups)
      for (std::size_t i = 0; i < g.size() && admissible == 0; ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
          if (!excluded.count(unordered_key(corpus[g[i]].id, corpus[g[j]].id))) {
            admissible = 1;
            break;
          }
    if (admissible == 0) throw Error("every admissible negative pair is excluded");
  }

  Rng rng(seed);
  std::vector<IdPair> out;
  out.reserve(n);
  while (out.size() < n) {
    const std::uint64_t r = rng.below(total);
    const auto gi = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
    const auto& g = groups[gi];
    const std::size_t i = rng.below(g.size());
    std::size_t j = rng.below(g.size() - 1);
    if (j >= i) ++j;
    const auto& a = corpus[g[i]].id;
    const auto& b = corpus[g[j]].id;
    if (!excluded.empty() && excluded.count(unordered_key(a, b))) continue;
    out.emplace_back(a, b);
  }
  return out;
}

PairBenchmark make_benchmark(const Corpus& corpus, std::span<const IdPair> positives,
                             std::span<const IdPair> negatives, NegativeStrategy strategy) {
  PairBenchmark bench;
  bench.strategy = strategy;
  auto add = [&](const IdPair& p, bool label) {
    if (!corpus.find(p.first)) throw Error("unknown document id '" + p.first + "'");
    if (!corpus.find(p.second)) throw Error("unknown document id '" + p.second + "'");
    if (p.first == p.second) throw Error("self-pair for document '" + p.first + "'");
    bench.pairs.push_back({p.first, p.second, label});
  };
  for (const auto& p : positives) add(p, true);
  for (const auto& p : negatives) add(p, false);
  return bench;
}

PairScores score_pairs(const VectorStore& store, std::span<const LabeledPair> pairs) {
  PairScores out;
  out.scores.resize(pairs.size());
  std::vector<char> zero(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    auto r = store.similarity(pairs[i].a, pairs[i].b);
    out.scores[i] = r.value;
    zero[i] = r.zero_norm;
  });
  out.zero_norm = static_cast<std::size_t>(std::count(zero.begin(), zero.end(), 1));
  return out;
}

PairScores score_pairs(const IdfReplacement& ctx, std::span<const LabeledPair> pairs) {
  std::unordered_map<std::string_view, const TokenStream*> streams;
  for (const auto& s : ctx.streams) streams.emplace(s.doc_id, &s);
  auto stream_of = [&](const std::string& id) -> const TokenStream& {
    auto it = streams.find(id);
    if (it == streams.end()) throw Error("no token stream for document '" + id + "'");
    return *it->second;
  };
  PairScores out;
  out.scores.resize(pairs.size());
  std::vector<char> zero(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& da = ctx.corpus.at(pairs[i].a);
    const auto& db = ctx.corpus.at(pairs[i].b);
    const auto month = (earlier(da, db) ? da : db).date.month_index();
    auto va = incremental_tfidf_vector(stream_of(da.id), ctx.vocab, ctx.timeline, month);
    auto vb = incremental_tfidf_vector(stream_of(db.id), ctx.vocab, ctx.timeline, month);
    auto r = cosine_checked(va, vb);
    out.scores[i] = r.value;
    zero[i] = r.zero_norm;
  });
  out.zero_norm = static_cast<std::size_t>(std::count(zero.begin(), zero.end(), 1));
  return out;
}

RocResult roc_auc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw Error("roc_auc: labels and scores differ in length");
  std::size_t pos = 0;
  for (int l : labels) pos += l != 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw Error("roc_auc needs both positive and negative labels");

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult roc;
  roc.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  double area = 0.0;  // in units of (neg * pos)
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    const std::size_t tp0 = tp, fp0 = fp;
    for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] ? tp : fp)++;
    area += static_cast<double>(fp - fp0) * static_cast<double>(tp + tp0) / 2.0;
    roc.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos));
  }
  roc.auc = area / (static_cast<double>(neg) * static_cast<double>(pos));
  return roc;
}

RocResult roc_auc(std::span<const LabeledPair> pairs, std::span<const double> scores) {
  std::vector<int> labels(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) labels[i] = pairs[i].positive ? 1 : 0;
  return roc_auc(labels, scores);
}

void write_roc_csv(const RocResult& roc, std::ostream& out) {
  out << "fpr,tpr\n";
  out.precision(17);
  for (const auto& [fpr, tpr] : roc.points) out << fpr << ',' << tpr << '\n';
}

void write_roc_csv(const RocResult& roc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write ROC file '" + path + "'");
  write_roc_csv(roc, out);
}

}  // namespace simvec
