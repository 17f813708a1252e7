#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "simvec/corpus.hpp"
#include "simvec/d2v.hpp"
#include "simvec/eval.hpp"
#include "simvec/lsi.hpp"

namespace simvec {

enum class Method { kTfidf, kTfidfIncremental, kTfidfPhrase, kLsi, kD2v, kW2vAvg };

Method parse_method(std::string_view name);
std::string_view method_name(Method m);
// True when run_experiment reproduces the AUC bit for bit.
bool is_deterministic(Method m, const struct RunConfig& config);

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency

  // [paths]
  std::string corpus;
  std::string positives;
  std::string output = "simvec-out";

  // [preprocess]
  Field field = Field::kTitle;
  bool stem = true;
  std::uint32_t min_df = 2;

  // [method]
  Method method = Method::kTfidf;

  // [phrases]
  std::size_t phrase_top_k = 1000;
  std::size_t phrase_max_len = 4;

  // [lsi]
  int lsi_topics = 100;
  std::size_t lsi_chunksize = 0;
  double lsi_decay = 1.0;
  MatrixWeighting lsi_weighting = MatrixWeighting::kTfidf;
  SvdSolver lsi_solver = SvdSolver::kAuto;

  // [d2v] (also the word model for w2v-avg, where dm=1 selects CBOW)
  TrainParams d2v;
  AverageWeighting w2v_weighting = AverageWeighting::kTfidf;

  // [benchmark]
  NegativeStrategy strategy = NegativeStrategy::kRandom;
  std::size_t negatives = 1000;
  std::string negatives_file;  // used with strategy = given
  bool exclude_positives = false;

  bool operator==(const RunConfig&) const = default;

  // Flat "key = value" lines grouped under "[section]" headers; '#' starts a
  // comment. Unknown keys and bad values throw simvec::Error with the line.
  static RunConfig parse(std::istream& in);
  static RunConfig parse_file(const std::string& path);
  // Applies one "section.key=value" override (top-level keys have no dot).
  void set(std::string_view key, std::string_view value);
  void validate() const;
  void serialize(std::ostream& out) const;
  std::string to_string() const;
};

}  // namespace simvec
