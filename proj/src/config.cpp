#include "simvec/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "simvec/error.hpp"
#include "simvec/tune.hpp"

namespace simvec {

Method parse_method(std::string_view name) {
  if (name == "tfidf") return Method::kTfidf;
  if (name == "tfidf-inc") return Method::kTfidfIncremental;
  if (name == "tfidf-phrase") return Method::kTfidfPhrase;
  if (name == "lsi") return Method::kLsi;
  if (name == "d2v") return Method::kD2v;
  if (name == "w2v-avg") return Method::kW2vAvg;
  throw Error("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kTfidf: return "tfidf";
    case Method::kTfidfIncremental: return "tfidf-inc";
    case Method::kTfidfPhrase: return "tfidf-phrase";
    case Method::kLsi: return "lsi";
    case Method::kD2v: return "d2v";
    case Method::kW2vAvg: return "w2v-avg";
  }
  return "?";
}

bool is_deterministic(Method m, const RunConfig& config) {
  switch (m) {
    case Method::kD2v:
    case Method::kW2vAvg: return config.d2v.workers == 1;
    default: return true;
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T x{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw Error("bad value '" + std::string(v) + "' for " + std::string(key));
  return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("bad boolean '" + std::string(v) + "' for " + std::string(key));
}

std::string_view solver_name(SvdSolver s) {
  switch (s) {
    case SvdSolver::kAuto: return "auto";
    case SvdSolver::kDense: return "dense";
    case SvdSolver::kRandomized: return "randomized";
  }
  return "?";
}

SvdSolver parse_solver(std::string_view v) {
  if (v == "auto") return SvdSolver::kAuto;
  if (v == "dense") return SvdSolver::kDense;
  if (v == "randomized") return SvdSolver::kRandomized;
  throw Error("unknown svd solver '" + std::string(v) + "'");
}

std::string_view weighting_name(MatrixWeighting w) {
  switch (w) {
    case MatrixWeighting::kRawCount: return "raw-count";
    case MatrixWeighting::kBinary: return "binary";
    case MatrixWeighting::kTfidf: return "tfidf";
  }
  return "?";
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  const std::string k(trim(key));
  if (k == "seed") seed = parse_number<std::uint64_t>(k, v);
  else if (k == "threads") threads = parse_number<std::size_t>(k, v);
  else if (k == "paths.corpus") corpus = v;
  else if (k == "paths.positives") positives = v;
  else if (k == "paths.output") output = v;
  else if (k == "preprocess.field") field = parse_field(v);
  else if (k == "preprocess.stem") stem = parse_bool(k, v);
  else if (k == "preprocess.min_df") min_df = parse_number<std::uint32_t>(k, v);
  else if (k == "method.name") method = parse_method(v);
  else if (k == "phrases.top_k") phrase_top_k = parse_number<std::size_t>(k, v);
  else if (k == "phrases.max_len") phrase_max_len = parse_number<std::size_t>(k, v);
  else if (k == "lsi.topics") lsi_topics = parse_number<int>(k, v);
  else if (k == "lsi.chunksize") lsi_chunksize = parse_number<std::size_t>(k, v);
  else if (k == "lsi.decay") lsi_decay = parse_number<double>(k, v);
  else if (k == "lsi.weighting") lsi_weighting = parse_weighting(v);
  else if (k == "lsi.solver") lsi_solver = parse_solver(v);
  else if (k == "d2v.dm") d2v.dm = parse_number<int>(k, v);
  else if (k == "d2v.hs") d2v.hs = parse_number<int>(k, v);
  else if (k == "d2v.size") d2v.size = parse_number<int>(k, v);
  else if (k == "d2v.window") d2v.window = parse_number<int>(k, v);
  else if (k == "d2v.sample") d2v.sample = parse_number<double>(k, v);
  else if (k == "d2v.iter") d2v.iter = parse_number<int>(k, v);
  else if (k == "d2v.negative") d2v.negative = parse_number<int>(k, v);
  else if (k == "d2v.alpha0") d2v.alpha0 = parse_number<double>(k, v);
  else if (k == "d2v.workers") d2v.workers = parse_number<int>(k, v);
  else if (k == "d2v.average") {
    if (v == "uniform") w2v_weighting = AverageWeighting::kUniform;
    else if (v == "tfidf") w2v_weighting = AverageWeighting::kTfidf;
    else throw Error("unknown averaging '" + std::string(v) + "'");
  } else if (k == "benchmark.strategy") strategy = parse_strategy(v);
  else if (k == "benchmark.negatives") negatives = parse_number<std::size_t>(k, v);
  else if (k == "benchmark.negatives_file") negatives_file = v;
  else if (k == "benchmark.exclude_positives") exclude_positives = parse_bool(k, v);
  else throw Error("unknown config key '" + k + "'");
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig c;
  std::string section;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    try {
      if (s.front() == '[') {
        if (s.back() != ']') throw Error("unterminated section header");
        section = std::string(trim(s.substr(1, s.size() - 2)));
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string_view::npos) throw Error("expected 'key = value'");
      std::string key(trim(s.substr(0, eq)));
      if (!section.empty()) key = section + "." + key;
      c.set(key, s.substr(eq + 1));
    } catch (const Error& e) {
      throw Error("config line " + std::to_string(n) + ": " + e.what());
    }
  }
  return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  return parse(in);
}

void RunConfig::validate() const {
  if (corpus.empty()) throw Error("config: paths.corpus is required");
  if (positives.empty()) throw Error("config: paths.positives is required");
  if (field == Field::kAll) throw Error("config: field must be title, abstract or description");
  if (min_df < 1) throw Error("config: min_df must be >= 1");
  if (strategy == NegativeStrategy::kGiven && negatives_file.empty())
    throw Error("config: strategy 'given' needs benchmark.negatives_file");
  if (strategy != NegativeStrategy::kGiven && negatives == 0)
    throw Error("config: benchmark.negatives must be positive");
  if (method == Method::kLsi) {
    if (lsi_topics < 1) throw Error("config: lsi.topics must be >= 1");
    if (!(lsi_decay > 0.0 && lsi_decay <= 1.0)) throw Error("config: lsi.decay must be in (0, 1]");
  }
  if (method == Method::kD2v || method == Method::kW2vAvg) d2v.validate();
  if (method == Method::kTfidfPhrase && phrase_max_len < 2)
    throw Error("config: phrases.max_len must be >= 2");
}

void RunConfig::serialize(std::ostream& out) const {
  auto real = [](double x) { return format_value(ParamValue(x)); };
  out << "seed = " << seed << "\nthreads = " << threads << "\n";
  out << "\n[paths]\ncorpus = " << corpus << "\npositives = " << positives
      << "\noutput = " << output << "\n";
  out << "\n[preprocess]\nfield = " << field_name(field) << "\nstem = " << (stem ? "true" : "false")
      << "\nmin_df = " << min_df << "\n";
  out << "\n[method]\nname = " << method_name(method) << "\n";
  out << "\n[phrases]\ntop_k = " << phrase_top_k << "\nmax_len = " << phrase_max_len << "\n";
  out << "\n[lsi]\ntopics = " << lsi_topics << "\nchunksize = " << lsi_chunksize
      << "\ndecay = " << real(lsi_decay) << "\nweighting = " << weighting_name(lsi_weighting)
      << "\nsolver = " << solver_name(lsi_solver) << "\n";
  out << "\n[d2v]\ndm = " << d2v.dm << "\nhs = " << d2v.hs << "\nsize = " << d2v.size
      << "\nwindow = " << d2v.window << "\nsample = " << real(d2v.sample) << "\niter = " << d2v.iter
      << "\nnegative = " << d2v.negative << "\nalpha0 = " << real(d2v.alpha0)
      << "\nworkers = " << d2v.workers << "\naverage = "
      << (w2v_weighting == AverageWeighting::kTfidf ? "tfidf" : "uniform") << "\n";
  out << "\n[benchmark]\nstrategy = " << strategy_name(strategy) << "\nnegatives = " << negatives
      << "\nnegatives_file = " << negatives_file
      << "\nexclude_positives = " << (exclude_positives ? "true" : "false") << "\n";
}

std::string RunConfig::to_string() const {
  std::ostringstream os;
  serialize(os);
  return os.str();
}

}  // namespace simvec
