#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "simvec/error.hpp"
#include "simvec/rng.hpp"
#include "simvec/tfidf.hpp"

using namespace simvec;

namespace {

TokenStream ts(std::string id, std::vector<std::string> tokens) {
  return {std::move(id), Field::kTitle, std::move(tokens)};
}

Corpus corpus_of(std::vector<std::pair<std::string, std::string>> id_dates) {
  std::vector<Document> docs;
  for (auto& [id, date] : id_dates) {
    Document d;
    d.id = id;
    d.date = *Date::parse(date);
    docs.push_back(d);
  }
  return Corpus(std::move(docs));
}

double weight(const SparseVector& v, const Vocabulary& vocab, const std::string& term) {
  auto i = vocab.index(term);
  if (!i) return 0.0;
  for (const auto& e : v.entries)
    if (e.index == *i) return e.weight;
  return 0.0;
}

}  // namespace

TEST_SUITE("tfidf") {

TEST_CASE("build_vocabulary examples") {
  auto v = build_vocabulary(std::vector{ts("0", {"a", "a", "b"}), ts("1", {"a"})});
  CHECK(v.n_docs() == 2);
  CHECK(v.df(*v.index("a")) == 2);
  CHECK(v.df(*v.index("b")) == 1);

  auto one = build_vocabulary(std::vector{ts("0", {"x"})});
  CHECK(one.n_docs() == 1);
  CHECK(one.df(*one.index("x")) == 1);

  auto with_empty = build_vocabulary(std::vector{ts("0", {"a"}), ts("1", {})});
  CHECK(with_empty.n_docs() == 2);
  CHECK(with_empty.df(*with_empty.index("a")) == 1);

  CHECK_THROWS_WITH_AS(build_vocabulary(std::vector{ts("0", {}), ts("1", {})}),
                       doctest::Contains("empty vocabulary"), Error);
}

TEST_CASE("vocabulary indices are a bijection") {
  auto v = build_vocabulary(std::vector{ts("0", {"q", "b", "k"}), ts("1", {"b", "z"})});
  for (TermIndex i = 0; i < v.size(); ++i) CHECK(*v.index(v.term(i)) == i);
}

TEST_CASE("tfidf_vector examples") {
  auto v = build_vocabulary(std::vector{ts("0", {"t", "t", "u"}), ts("1", {"u"}), ts("2", {"u", "w"})});
  auto x = tfidf_vector(ts("0", {"t", "t", "u"}), v);
  CHECK(weight(x, v, "t") == doctest::Approx(2.0 * std::log(4.0 / 2.0)).epsilon(1e-15));
  CHECK(weight(x, v, "t") == doctest::Approx(1.3863).epsilon(1e-4));
  // u occurs everywhere: weight 0, not stored.
  CHECK(x.entries.size() == 1);
  auto empty = tfidf_vector(ts("e", {}), v);
  CHECK(empty.entries.empty());
  CHECK(empty.dim == v.size());
  CHECK(tfidf_vector(ts("n", {"never"}), v).entries.empty());
}

TEST_CASE("weights fall as document frequency grows") {
  for (std::uint64_t n = 1; n < 30; ++n)
    for (std::uint64_t df = 1; df < n; ++df)
      CHECK(tfidf_weight(3, n, df) >= tfidf_weight(3, n, df + 1));
}

TEST_CASE("agrees with a brute-force recount") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TokenStream> s;
    for (int d = 0; d < 20; ++d) {
      TokenStream t = ts(std::to_string(d), {});
      const auto len = rng.below(25);
      for (std::uint64_t i = 0; i < len; ++i) t.tokens.push_back("t" + std::to_string(rng.below(60)));
      s.push_back(t);
    }
    auto v = build_vocabulary(s);
    for (std::size_t d = 0; d < s.size(); ++d) {
      auto got = tfidf_vector(s[d], v);
      auto want = oracle::tfidf(s, d);
      REQUIRE(got.entries.size() == want.size());
      for (const auto& e : got.entries) {
        const double w = want.at(v.term(e.index));
        CHECK(std::abs(e.weight - w) <= 1e-12 * std::abs(w));
      }
    }
  }
}

TEST_CASE("timeline examples") {
  auto c = corpus_of({{"d0", "2000-01-10"}, {"d1", "2000-03-05"}});
  std::vector<TokenStream> s{ts("d0", {"a"}), ts("d1", {"a", "b"})};
  auto v = build_vocabulary(s);
  auto tl = build_df_timeline(c, s, v);
  const auto jan = Date{2000, 1, 1}.month_index(), feb = Date{2000, 2, 1}.month_index(),
             mar = Date{2000, 3, 1}.month_index();
  auto pj = tl.snapshot(jan), pf = tl.snapshot(feb), pm = tl.snapshot(mar);
  REQUIRE(pj);
  REQUIRE(pm);
  CHECK(tl.n_at(*pj) == 1);
  CHECK(tl.df_at(*v.index("a"), *pj) == 1);
  CHECK(tl.df_at(*v.index("b"), *pj) == 0);
  CHECK(*pf == *pj);  // no documents in February
  CHECK(tl.n_at(*pm) == 2);
  CHECK(tl.df_at(*v.index("a"), *pm) == 2);
  CHECK(tl.df_at(*v.index("b"), *pm) == 1);
  CHECK_FALSE(tl.snapshot(Date{1999, 12, 1}.month_index()).has_value());
  CHECK_THROWS_AS(incremental_tfidf_vector(s[0], v, tl, Date{1999, 12, 1}.month_index()), Error);
}

TEST_CASE("single-month timeline equals the vocabulary") {
  auto c = corpus_of({{"x", "2001-05-01"}, {"y", "2001-05-30"}});
  std::vector<TokenStream> s{ts("x", {"p", "q"}), ts("y", {"q"})};
  auto v = build_vocabulary(s);
  auto tl = build_df_timeline(c, s, v);
  CHECK(tl.months().size() == 1);
  for (TermIndex t = 0; t < v.size(); ++t) CHECK(tl.df_at(t, 0) == v.df(t));
  CHECK(tl.n_at(0) == v.n_docs());
}

TEST_CASE("incremental examples") {
  // Focal document alone: every weight is TF * ln(2/2) = 0.
  auto c1 = corpus_of({{"first", "2000-01-01"}, {"later", "2001-01-01"}});
  std::vector<TokenStream> s1{ts("first", {"a", "b"}), ts("later", {"a"})};
  auto v1 = build_vocabulary(s1);
  auto tl1 = build_df_timeline(c1, s1, v1);
  CHECK(incremental_tfidf_vector(s1[0], v1, tl1, Date{2000, 1, 1}.month_index()).entries.empty());

  // 999 earlier documents, then a focal one introducing a new term.
  std::vector<std::pair<std::string, std::string>> dates;
  std::vector<TokenStream> s;
  for (int i = 0; i < 999; ++i) {
    dates.emplace_back("old" + std::to_string(i), "1999-06-01");
    s.push_back(ts("old" + std::to_string(i), {"common"}));
  }
  dates.emplace_back("focal", "2000-02-01");
  s.push_back(ts("focal", {"novel", "common"}));
  auto c = corpus_of(dates);
  auto v = build_vocabulary(s);
  auto tl = build_df_timeline(c, s, v);
  auto x = incremental_tfidf_vector(s.back(), v, tl, Date{2000, 2, 1}.month_index());
  CHECK(weight(x, v, "novel") == doctest::Approx(std::log(1001.0 / 2.0)).epsilon(1e-14));
  CHECK(weight(x, v, "novel") == doctest::Approx(6.2156).epsilon(1e-4));
}

TEST_CASE("augment_with_phrases appends count copies") {
  auto s = ts("d", {"neural", "network"});
  CHECK(augment_with_phrases(s, {{"neural_network", 1}}).tokens ==
        std::vector<std::string>{"neural", "network", "neural_network"});
  CHECK(augment_with_phrases(s, {}) == s);
  auto three = augment_with_phrases(s, {{"x_y", 3}});
  auto v = build_vocabulary(std::vector{three, ts("o", {"other"})});
  auto counts = term_counts(three.tokens, v);
  for (auto [idx, tf] : counts)
    if (v.term(idx) == "x_y") CHECK(tf == 3);
}

}  // TEST_SUITE
