#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "simvec/config.hpp"
#include "simvec/error.hpp"
#include "simvec/pipeline.hpp"
#include "simvec/synth.hpp"
#include "test_util.hpp"

using namespace simvec;
namespace fs = std::filesystem;

namespace {

// Writes a two-cluster corpus and its positives; returns a config for it.
RunConfig two_cluster_config(const std::string& name, Method method) {
  auto dir = testutil::scratch(name);
  auto synth = make_two_cluster_corpus(3, 40);
  write_corpus(synth.corpus, (dir / "corpus.jsonl").string());
  std::ofstream pos(dir / "positives.tsv");
  write_pairs(synth.positives, pos);
  pos.close();
  RunConfig c;
  c.corpus = (dir / "corpus.jsonl").string();
  c.positives = (dir / "positives.tsv").string();
  c.output = (dir / "out").string();
  c.method = method;
  c.negatives = 200;
  c.min_df = 1;
  c.lsi_topics = 8;
  c.d2v.size = 16;
  c.d2v.iter = 3;
  c.d2v.workers = 1;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config round trip") {
  RunConfig c;
  c.seed = 42;
  c.corpus = "data/c.jsonl";
  c.positives = "data/p.tsv";
  c.field = Field::kAbstract;
  c.method = Method::kLsi;
  c.lsi_topics = 250;
  c.lsi_decay = 0.75;
  c.lsi_weighting = MatrixWeighting::kBinary;
  c.d2v.sample = 1.2345678901234567e-5;
  c.d2v.hs = 1;
  c.w2v_weighting = AverageWeighting::kUniform;
  c.strategy = NegativeStrategy::kSameSubclass;
  c.exclude_positives = true;
  std::stringstream text(c.to_string());
  CHECK(RunConfig::parse(text) == c);

  RunConfig d;
  std::stringstream empty_text(d.to_string());
  CHECK(RunConfig::parse(empty_text) == d);
}

TEST_CASE("config parsing errors and overrides") {
  std::stringstream unknown("[lsi]\nbogus = 1\n");
  CHECK_THROWS_WITH_AS(RunConfig::parse(unknown), doctest::Contains("line 2"), Error);
  std::stringstream bad_value("[d2v]\nsize = many\n");
  CHECK_THROWS_AS(RunConfig::parse(bad_value), Error);
  std::stringstream bad_method("[method]\nname = bert\n");
  CHECK_THROWS_AS(RunConfig::parse(bad_method), Error);

  RunConfig c;
  c.set("method.name", "d2v");
  c.set("d2v.window", "7");
  c.set("seed", "9");
  CHECK(c.method == Method::kD2v);
  CHECK(c.d2v.window == 7);
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(c.set("nope.key", "1"), Error);

  c.corpus = "x";
  c.positives = "y";
  c.d2v.size = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  for (auto m : {Method::kTfidf, Method::kTfidfIncremental, Method::kTfidfPhrase, Method::kLsi,
                 Method::kD2v, Method::kW2vAvg})
    CHECK(parse_method(method_name(m)) == m);
}

TEST_CASE("token, phrase and vector stores round trip") {
  std::vector<TokenStream> s{{"a", Field::kAbstract, {"gear", "shaft"}},
                             {"b", Field::kAbstract, {}}};
  std::stringstream tok;
  write_token_store(s, tok);
  CHECK(read_token_store(tok) == s);

  std::vector<DocPhrases> p{{"a", {{"fast_gear", 2}, {"gear_shaft", 1}}}, {"b", {}}};
  std::stringstream ph;
  write_phrase_store(p, ph);
  CHECK(read_phrase_store(ph) == p);

  auto sparse = VectorStore::sparse(5);
  sparse.add("a", SparseVector{{{1, 0.1}, {4, 1.0 / 3.0}}, 5});
  sparse.add("b", SparseVector{{}, 5});
  std::stringstream sv;
  sparse.write(sv);
  CHECK(VectorStore::read(sv) == sparse);
  CHECK_THROWS_AS(sparse.add("a", SparseVector{{}, 5}), Error);
  CHECK_THROWS_AS(sparse.add("c", SparseVector{{}, 4}), Error);
  CHECK_THROWS_AS(sparse.add("c", DenseVector(5)), Error);
  CHECK_THROWS_WITH_AS(sparse.similarity("a", "zz"), doctest::Contains("zz"), Error);

  auto dense = VectorStore::dense(3);
  dense.add("x", DenseVector({1e-300, -2.5, 3.0 / 7.0}));
  std::stringstream dv;
  dense.write(dv);
  CHECK(VectorStore::read(dv) == dense);
}

TEST_CASE("run_experiment on a separable corpus") {
  auto c = two_cluster_config("run-tfidf", Method::kTfidf);
  auto r = run_experiment(c);
  CHECK(r.auc > 0.95);
  CHECK(r.auc <= 1.0);
  CHECK(r.wall_seconds > 0.0);
  CHECK(r.method == "tfidf");
  CHECK(r.positives > 0);
  CHECK(r.negatives == 200);
  for (const char* f : {"config.ini", "tokens.tsv", "vectors.tsv", "roc.csv", "summary.csv"})
    CHECK(fs::exists(fs::path(c.output) / f));
  auto again = run_experiment(c);
  CHECK(again.line() == r.line());
  CHECK(RunConfig::parse_file((fs::path(c.output) / "config.ini").string()) == c);
}

TEST_CASE("every method runs") {
  for (auto m : {Method::kTfidfIncremental, Method::kTfidfPhrase, Method::kLsi, Method::kD2v,
                 Method::kW2vAvg}) {
    auto c = two_cluster_config("run-" + std::string(method_name(m)), m);
    INFO(method_name(m));
    SummaryRecord r;
    CHECK_NOTHROW(r = run_experiment(c));
    CHECK(r.auc >= 0.0);
    CHECK(r.auc <= 1.0);
    if (is_deterministic(m, c)) CHECK(run_experiment(c).auc == r.auc);
  }
}

TEST_CASE("missing inputs fail before any compute") {
  auto c = two_cluster_config("run-missing", Method::kTfidf);
  c.positives = c.positives + ".missing";
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const StageError& e) {
    CHECK(std::string(e.what()).find(c.positives) != std::string::npos);
  }
  CHECK_FALSE(fs::exists(fs::path(c.output) / "tokens.tsv"));

  auto g = two_cluster_config("run-given", Method::kTfidf);
  g.strategy = NegativeStrategy::kGiven;
  CHECK_THROWS_AS(run_experiment(g), Error);
}

TEST_CASE("stage errors carry the stage name") {
  try {
    run_stage("train", []() -> int { throw Error("bad input"); });
    FAIL("expected an error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "train");
    CHECK(std::string(e.what()) == "train: bad input");
  }
}

}  // TEST_SUITE
