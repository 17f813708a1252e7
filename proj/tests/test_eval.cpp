#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "simvec/error.hpp"
#include "simvec/eval.hpp"

using namespace simvec;

namespace {

Document doc(std::string id, std::string date, std::string cls, std::string sub,
             std::string title = {}) {
  Document d;
  d.id = std::move(id);
  d.date = *Date::parse(date);
  d.main_class = std::move(cls);
  d.subclass = std::move(sub);
  d.title = std::move(title);
  return d;
}

Corpus classed_corpus() {
  return Corpus({doc("a1", "2000-01-01", "A", "A1"), doc("a2", "2000-02-01", "A", "A1"),
                 doc("a3", "2000-03-01", "A", "A2"), doc("a4", "2000-04-01", "A", "A2"),
                 doc("b1", "2001-01-01", "B", "A1"), doc("b2", "2001-02-01", "B", "B1"),
                 doc("c1", "2002-01-01", "C", "C1")});
}

IdPair ordered(IdPair p) {
  if (p.second < p.first) std::swap(p.first, p.second);
  return p;
}

TokenStream ts(std::string id, std::vector<std::string> tokens) {
  return {std::move(id), Field::kTitle, std::move(tokens)};
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("strategy names") {
  for (auto s : {NegativeStrategy::kGiven, NegativeStrategy::kSameSubclass,
                 NegativeStrategy::kSameClass, NegativeStrategy::kRandom})
    CHECK(parse_strategy(strategy_name(s)) == s);
  CHECK_THROWS_AS(parse_strategy("nearby"), Error);
}

TEST_CASE("negatives respect their constraint") {
  auto c = classed_corpus();
  for (const auto& [a, b] : build_negatives(c, 500, NegativeStrategy::kSameSubclass, 1)) {
    CHECK(a != b);
    CHECK(c.at(a).main_class == c.at(b).main_class);
    CHECK(c.at(a).subclass == c.at(b).subclass);
  }
  for (const auto& [a, b] : build_negatives(c, 500, NegativeStrategy::kSameClass, 1)) {
    CHECK(a != b);
    CHECK(c.at(a).main_class == c.at(b).main_class);
  }
  for (const auto& [a, b] : build_negatives(c, 500, NegativeStrategy::kRandom, 1)) CHECK(a != b);
}

TEST_CASE("negatives are uniform over admissible pairs") {
  auto c = classed_corpus();
  // Same class: 6 pairs in A, 1 in B.
  std::map<IdPair, double> hits;
  const int n = 70000;
  for (auto p : build_negatives(c, n, NegativeStrategy::kSameClass, 4)) hits[ordered(p)] += 1.0;
  CHECK(hits.size() == 7);
  for (const auto& [p, h] : hits) CHECK(std::abs(h / n - 1.0 / 7.0) < 0.01);

  std::map<IdPair, double> any;
  for (auto p : build_negatives(c, n, NegativeStrategy::kRandom, 4)) any[ordered(p)] += 1.0;
  CHECK(any.size() == 21);
  for (const auto& [p, h] : any) CHECK(std::abs(h / n - 1.0 / 21.0) < 0.01);
}

TEST_CASE("negatives: forced pair, determinism, exclusions and errors") {
  Corpus two({doc("x", "2000-01-01", "A", "A1"), doc("y", "2000-01-01", "B", "B1")});
  auto five = build_negatives(two, 5, NegativeStrategy::kRandom, 9);
  REQUIRE(five.size() == 5);
  for (auto p : five) CHECK(ordered(p) == IdPair{"x", "y"});

  auto c = classed_corpus();
  CHECK(build_negatives(c, 50, NegativeStrategy::kRandom, 3) ==
        build_negatives(c, 50, NegativeStrategy::kRandom, 3));
  CHECK(build_negatives(c, 50, NegativeStrategy::kRandom, 3) !=
        build_negatives(c, 50, NegativeStrategy::kRandom, 4));

  std::vector<IdPair> excl{{"a2", "a1"}};
  for (auto p : build_negatives(c, 300, NegativeStrategy::kSameSubclass, 2, excl))
    CHECK(ordered(p) != IdPair{"a1", "a2"});

  CHECK_THROWS_AS(build_negatives(two, 5, NegativeStrategy::kSameClass, 1), Error);
  CHECK_THROWS_AS(build_negatives(c, 5, NegativeStrategy::kGiven, 1), Error);
  Corpus one({doc("x", "2000-01-01", "A", "A1")});
  CHECK_THROWS_AS(build_negatives(one, 1, NegativeStrategy::kRandom, 1), Error);
}

TEST_CASE("pairs files and benchmark validation") {
  std::stringstream in("# header\na1\ta2\n\nb1\tc1\n");
  auto pairs = read_pairs(in);
  CHECK(pairs == std::vector<IdPair>{{"a1", "a2"}, {"b1", "c1"}});
  std::stringstream out;
  write_pairs(pairs, out);
  CHECK(read_pairs(out) == pairs);
  std::stringstream bad("onlyone\n");
  CHECK_THROWS_AS(read_pairs(bad), Error);

  auto c = classed_corpus();
  std::vector<IdPair> neg{{"a1", "c1"}};
  auto bench = make_benchmark(c, pairs, neg, NegativeStrategy::kGiven);
  CHECK(bench.pairs.size() == 3);
  CHECK(bench.pairs[0].positive);
  CHECK_FALSE(bench.pairs[2].positive);
  std::vector<IdPair> ghost{{"a1", "zz"}}, self{{"a1", "a1"}};
  CHECK_THROWS_WITH_AS(make_benchmark(c, ghost, neg, NegativeStrategy::kGiven),
                       doctest::Contains("zz"), Error);
  CHECK_THROWS_AS(make_benchmark(c, self, neg, NegativeStrategy::kGiven), Error);
}

TEST_CASE("scoring in both modes") {
  Corpus c({doc("p", "2002-01-01", "A", "A1"), doc("q", "2002-01-01", "A", "A1"),
            doc("r", "2003-05-01", "B", "B1"), doc("s", "2001-07-01", "B", "B1"),
            doc("t", "2001-07-20", "B", "B1")});
  std::vector<TokenStream> s{ts("p", {"gear", "shaft", "gear"}), ts("q", {"gear", "shaft", "gear"}),
                             ts("r", {"lens", "prism"}), ts("s", {"gear", "lens", "bolt"}),
                             ts("t", {"bolt", "shaft", "nut"})};
  auto vocab = build_vocabulary(s);
  auto tl = build_df_timeline(c, s, vocab);
  auto store = VectorStore::sparse(vocab.size());
  for (const auto& x : s) store.add(x.doc_id, tfidf_vector(x, vocab));

  std::vector<LabeledPair> pairs{{"p", "q", true}, {"p", "r", false}, {"s", "t", false}};
  auto std_scores = score_pairs(store, pairs);
  auto idf_scores = score_pairs(IdfReplacement{c, s, vocab, tl}, pairs);
  CHECK(std_scores.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(idf_scores.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std_scores.scores[1] == 0.0);
  CHECK(idf_scores.scores[1] == 0.0);

  const auto month = Date{2001, 7, 1}.month_index();
  const double expect = cosine(incremental_tfidf_vector(s[3], vocab, tl, month),
                               incremental_tfidf_vector(s[4], vocab, tl, month));
  CHECK(idf_scores.scores[2] == expect);

  std::vector<LabeledPair> unknown{{"p", "nobody", true}};
  CHECK_THROWS_WITH_AS(score_pairs(store, unknown), doctest::Contains("nobody"), Error);
  CHECK_THROWS_WITH_AS(score_pairs(IdfReplacement{c, s, vocab, tl}, unknown),
                       doctest::Contains("nobody"), Error);

  auto with_empty = VectorStore::sparse(vocab.size());
  with_empty.add("p", tfidf_vector(s[0], vocab));
  with_empty.add("e", SparseVector{{}, vocab.size()});
  std::vector<LabeledPair> ep{{"p", "e", false}};
  auto z = score_pairs(with_empty, ep);
  CHECK(z.scores[0] == 0.0);
  CHECK(z.zero_norm == 1);
}

TEST_CASE("AUC examples") {
  std::vector<int> l1{1, 1, 0, 0};
  std::vector<double> s1{0.9, 0.8, 0.4, 0.1};
  CHECK(roc_auc(l1, s1).auc == 1.0);
  std::vector<int> l2{1, 0};
  std::vector<double> s2{0.5, 0.5};
  CHECK(roc_auc(l2, s2).auc == 0.5);
  std::vector<int> l3{1, 0, 1, 0};
  std::vector<double> s3{0.9, 0.8, 0.7, 0.6};
  CHECK(roc_auc(l3, s3).auc == 0.75);
  std::vector<int> one{1, 1};
  CHECK_THROWS_AS(roc_auc(one, s2), Error);
  std::vector<double> short_scores{0.1};
  CHECK_THROWS_AS(roc_auc(l2, short_scores), Error);
}

TEST_CASE("AUC agrees with the pairwise oracle and its invariants") {
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.below(2));
      scores[i] = static_cast<double>(rng.below(trial % 2 ? 8 : 100000)) / 7.0;
    }
    labels[0] = 1;
    labels[1] = 0;
    auto r = roc_auc(labels, scores);
    CHECK(std::abs(r.auc - oracle::pairwise_auc(labels, scores)) <= 1e-12);

    REQUIRE(!r.points.empty());
    CHECK(r.points.front() == std::pair{0.0, 0.0});
    CHECK(r.points.back() == std::pair{1.0, 1.0});
    double area = 0.0;
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      CHECK(r.points[i].first >= r.points[i - 1].first);
      CHECK(r.points[i].second >= r.points[i - 1].second);
      area += (r.points[i].first - r.points[i - 1].first) *
              (r.points[i].second + r.points[i - 1].second) / 2.0;
    }
    CHECK(std::abs(area - r.auc) <= 1e-12);

    std::vector<double> warped(n), negated(n);
    std::vector<int> flipped(n);
    for (std::size_t i = 0; i < n; ++i) {
      warped[i] = std::exp(scores[i] / 1000.0) * 3.0 + 1.0;
      negated[i] = -scores[i];
      flipped[i] = 1 - labels[i];
    }
    CHECK(roc_auc(labels, warped).auc == r.auc);
    CHECK(std::abs(roc_auc(flipped, negated).auc - r.auc) <= 1e-12);
  }
}

TEST_CASE("ROC csv") {
  std::vector<int> l{1, 0};
  std::vector<double> s{0.9, 0.1};
  std::stringstream out;
  write_roc_csv(roc_auc(l, s), out);
  CHECK(out.str().rfind("fpr,tpr\n", 0) == 0);
}

}  // TEST_SUITE
