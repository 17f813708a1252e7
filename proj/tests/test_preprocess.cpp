#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "simvec/error.hpp"
#include "simvec/porter.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/rng.hpp"

using namespace simvec;

using Tokens = std::vector<std::string>;

TEST_SUITE("preprocess") {

TEST_CASE("stemmer matches the reference vocabulary") {
  std::ifstream in(std::string(SIMVEC_TEST_DATA) + "/porter_reference.tsv");
  REQUIRE(in);
  std::string line;
  std::size_t n = 0, bad = 0;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const auto word = line.substr(0, tab), expect = line.substr(tab + 1);
    if (porter_stem(word) != expect) {
      if (++bad <= 10) MESSAGE(word << " -> " << porter_stem(word) << " expected " << expect);
    }
    ++n;
  }
  CHECK(n > 5000);
  CHECK(bad == 0);
}

TEST_CASE("stem examples") {
  CHECK(stem("running") == "run");
  CHECK(stem("patent") == "patent");
  CHECK(stem("connections") == "connect");
}

TEST_CASE("clean_text examples") {
  const auto stop = StopwordSet::english();
  // "uses" stems to "us", which is itself a stopword.
  CHECK(clean_text("The <b>filter</b> uses 5nm pores, see http://a.b", stop) ==
        Tokens{"filter", "pore"});
  CHECK(clean_text("", stop).empty());
  CHECK(clean_text("ACGTACGTACGTACGT binding", stop) == Tokens{"bind"});
}

TEST_CASE("clean_text filters") {
  const auto stop = StopwordSet::english();
  CHECK(clean_text("a an of to", stop).empty());
  CHECK(clean_text("abc123 x9 alpha", stop) == Tokens{"alpha"});
  CHECK(clean_text("caf\xc3\xa9 gamma", stop) == Tokens{"gamma"});
  CHECK(clean_text("mail me at someone@example.com today", stop) == Tokens{"mail", "todai"});
  CHECK(clean_text("visit www.example.com now", stop) == Tokens{"visit"});
  CHECK(clean_text("&lt;tag&gt; sensor &amp; valve", stop) == Tokens{"tag", "sensor", "valv"});
  // Short runs and runs embedded in longer words survive.
  CHECK(clean_text("acgtacg cattle", stop) == Tokens{"acgtacg", "cattl"});
  CHECK(clean_text("Gated GATED", stop) == Tokens{"gate", "gate"});
}

TEST_CASE("clean_text without stemming is idempotent") {
  const auto stop = StopwordSet::english();
  Rng rng(17);
  const std::vector<std::string> words = {"Filter", "<i>pore</i>", "the",   "membrane", "x1",
                                          "http://q.r", "ACGTACGTACGT", "of", "signal", "Processing",
                                          "flows",   "ab",        "&amp;", "units",    "devices"};
  CleanOptions opts;
  opts.stem = false;
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto len = rng.below(12);
    for (std::uint64_t i = 0; i < len; ++i) text += words[rng.below(words.size())] + " ";
    auto once = clean_text(text, stop, opts);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(clean_text(joined, stop, opts) == once);
  }
}

TEST_CASE("stemmed output is not always a fixed point") {
  // Porter is not idempotent: agreed -> agre -> agr.
  CHECK(stem("agreed") == "agre");
  CHECK(stem("agre") == "agr");
}

TEST_CASE("user stopword files") {
  auto stop = StopwordSet::english();
  const auto before = stop.size();
  stop.add("apparatus");
  CHECK(stop.size() == before + 1);
  CHECK(clean_text("apparatus valve", stop) == Tokens{"valv"});
  CHECK_THROWS_AS(stop.add_file("/nonexistent/stop.txt"), Error);
}

TEST_CASE("prune_rare examples") {
  std::vector<TokenStream> s = {{"d0", Field::kTitle, {"a", "b"}}, {"d1", Field::kTitle, {"a"}}};
  auto keep = prune_rare(s, 1);
  CHECK(keep.streams == s);
  CHECK(keep.report.removed_terms.empty());

  auto two = prune_rare(s, 2);
  CHECK(two.streams[0].tokens == Tokens{"a"});
  CHECK(two.streams[1].tokens == Tokens{"a"});
  CHECK(two.report.removed_terms == std::set<std::string>{"b"});

  auto three = prune_rare(s, 3);
  CHECK(three.streams[0].tokens.empty());
  CHECK(three.streams[1].tokens.empty());
  CHECK(three.report.removed_terms == std::set<std::string>{"a", "b"});

  CHECK_THROWS_AS(prune_rare(s, 0), Error);
}

TEST_CASE("prune_rare survivors meet the threshold and keep order") {
  Rng rng(23);
  std::vector<TokenStream> s;
  for (int d = 0; d < 30; ++d) {
    TokenStream t{"d" + std::to_string(d), Field::kTitle, {}};
    const auto len = rng.below(15);
    for (std::uint64_t i = 0; i < len; ++i) t.tokens.push_back("w" + std::to_string(rng.below(25)));
    s.push_back(t);
  }
  for (std::uint32_t k : {1u, 2u, 3u, 5u}) {
    auto r = prune_rare(s, k);
    DfCounter df;
    for (const auto& t : r.streams) df.add(t.tokens);
    for (const auto& [term, count] : df.counts()) CHECK(count >= k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      // Subsequence check.
      std::size_t j = 0;
      for (const auto& tok : s[i].tokens)
        if (j < r.streams[i].tokens.size() && r.streams[i].tokens[j] == tok) ++j;
      CHECK(j == r.streams[i].tokens.size());
    }
    DfCounter orig;
    for (const auto& t : s) orig.add(t.tokens);
    for (const auto& term : r.report.removed_terms) CHECK(orig.df(term) < k);
  }
}

TEST_CASE("partial document frequencies merge by addition") {
  DfCounter a, b, all;
  a.add({"x", "y", "x"});
  b.add({"x"});
  b.add({"z"});
  for (const Tokens& t : {Tokens{"x", "y", "x"}, Tokens{"x"}, Tokens{"z"}}) all.add(t);
  a.merge(b);
  CHECK(a.counts() == all.counts());
  CHECK(a.n_docs() == 3);
  CHECK(a.df("x") == 2);
}

}  // TEST_SUITE
