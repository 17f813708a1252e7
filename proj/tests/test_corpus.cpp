#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "simvec/corpus.hpp"
#include "simvec/error.hpp"
#include "simvec/synth.hpp"

using namespace simvec;

namespace {

std::string record(const std::string& id, const std::string& date, const std::string& title = "t") {
  return R"({"id":")" + id + R"(","date":")" + date +
         R"(","main_class":"A","subclass":"A1","title":")" + title +
         R"(","abstract":"ab","description":"desc"})";
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("dates parse strictly") {
  CHECK(Date::parse("2018-02-28").has_value());
  CHECK(Date::parse("2016-02-29").has_value());
  CHECK_FALSE(Date::parse("2017-02-29").has_value());
  CHECK_FALSE(Date::parse("2018-13-01").has_value());
  CHECK_FALSE(Date::parse("2018-1-01").has_value());
  CHECK_FALSE(Date::parse("18-01-01").has_value());
  CHECK(Date::parse("2001-02-03")->to_string() == "2001-02-03");
  CHECK(Date::parse("2000-01-15")->month_index() + 2 == Date::parse("2000-03-01")->month_index());
}

TEST_CASE("three records load and are addressable") {
  std::istringstream in(record("a", "2000-01-01") + "\n" + record("b", "2000-01-02") + "\n" +
                        record("c", "2000-01-03") + "\n");
  auto r = ingest(in);
  CHECK(r.corpus.size() == 3);
  CHECK(r.skipped == 0);
  REQUIRE(r.corpus.find("b") != nullptr);
  CHECK(r.corpus.at("b").date.day == 2);
  CHECK_THROWS_WITH_AS(r.corpus.at("zz"), doctest::Contains("zz"), Error);
}

TEST_CASE("duplicate id names both lines") {
  std::ostringstream text;
  text << record("w", "2000-01-01") << "\n" << record("x", "2000-01-01") << "\n"
       << record("y", "2000-01-01") << "\n" << record("z", "2000-01-01") << "\n"
       << record("x", "2000-01-01") << "\n";
  std::istringstream in(text.str());
  try {
    ingest(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("lines 2 and 5") != std::string::npos);
  }
}

TEST_CASE("invalid month is skipped with a diagnostic") {
  std::istringstream in(record("a", "2000-01-01") + "\n" + record("b", "2018-13-01") + "\n" +
                        record("c", "2000-01-03") + "\n" + "not json\n");
  auto r = ingest(in);
  CHECK(r.corpus.size() == 2);
  CHECK(r.skipped == 2);
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].rfind("line 2:", 0) == 0);
  CHECK(r.diagnostics[1].rfind("line 4:", 0) == 0);
}

TEST_CASE("missing optional fields become empty; subclass needs a class") {
  std::istringstream in(R"({"id":"a","date":"2000-01-01","title":"x"})"
                        "\n"
                        R"({"id":"b","date":"2000-01-01","subclass":"S"})"
                        "\n");
  auto r = ingest(in);
  CHECK(r.corpus.size() == 1);
  CHECK(r.corpus.at("a").description.empty());
  CHECK(r.skipped == 1);
}

TEST_CASE("field selector keeps only the chosen field") {
  std::istringstream in(record("a", "2000-01-01", "hello") + "\n");
  auto r = ingest(in, Field::kTitle);
  CHECK(r.corpus.at("a").title == "hello");
  CHECK(r.corpus.at("a").abstract.empty());
}

TEST_CASE("unreadable file is fatal") {
  CHECK_THROWS_AS(ingest("/nonexistent/corpus.jsonl"), Error);
}

TEST_CASE("by_date orders by (date, id)") {
  std::istringstream in(record("b", "2001-02-03") + "\n" + record("c", "1999-01-01") + "\n" +
                        record("a", "2001-02-03") + "\n");
  auto c = ingest(in).corpus;
  auto order = by_date(c);
  REQUIRE(order.size() == 3);
  CHECK(order[0]->id == "c");
  CHECK(order[1]->id == "a");
  CHECK(order[2]->id == "b");

  std::istringstream one(record("q", "2000-01-01") + "\n");
  CHECK(by_date(ingest(one).corpus).size() == 1);
  CHECK(by_date(Corpus{}).empty());
}

TEST_CASE("by_date of sorted input is the identity") {
  std::istringstream in(record("a", "2000-01-01") + "\n" + record("b", "2000-01-01") + "\n" +
                        record("c", "2000-03-01") + "\n");
  auto c = ingest(in).corpus;
  auto order = by_date(c);
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == &c[i]);
}

TEST_CASE("round trip through the canonical writer") {
  auto synth = make_hierarchical_corpus({.classes = 2, .subclasses = 2, .docs_per_subclass = 6,
                                         .duplicates_per_subclass = 2, .global_vocab = 50,
                                         .class_vocab = 10, .subclass_vocab = 10});
  std::stringstream buf;
  write_corpus(synth.corpus, buf);
  auto again = ingest(buf);
  CHECK(again.skipped == 0);
  CHECK(again.corpus == synth.corpus);

  auto order = by_date(again.corpus);
  CHECK(order.size() == again.corpus.size());
  for (std::size_t i = 1; i < order.size(); ++i) CHECK_FALSE(earlier(*order[i], *order[i - 1]));
}

}  // TEST_SUITE
