// simvec command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simvec/config.hpp"
#include "simvec/corpus.hpp"
#include "simvec/d2v.hpp"
#include "simvec/eval.hpp"
#include "simvec/kernels.hpp"
#include "simvec/lsi.hpp"
#include "simvec/parallel.hpp"
#include "simvec/phrases.hpp"
#include "simvec/pipeline.hpp"
#include "simvec/stores.hpp"
#include "simvec/synth.hpp"
#include "simvec/tfidf.hpp"
#include "simvec/tune.hpp"

namespace fs = std::filesystem;
using namespace simvec;

namespace {

Field field_option(const std::string& name) {
  Field f = parse_field(name);
  if (f == Field::kAll) throw Error("--field must be title, abstract or description");
  return f;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string input, out, field = "title";
};

void cmd_ingest(const IngestArgs& a) {
  auto r = run_stage("ingest", [&] { return ingest(a.input, parse_field(a.field)); });
  for (const auto& d : r.diagnostics) std::cerr << "ingest: " << d << '\n';
  run_stage("ingest", [&] { write_corpus(r.corpus, a.out); });
  std::cout << "documents " << r.corpus.size() << " skipped " << r.skipped << '\n';
}

struct PreprocessArgs {
  std::string corpus, out, field = "title", stopwords;
  bool no_stem = false;
  bool raw = false;
  std::uint32_t min_df = 2;
};

void cmd_preprocess(const PreprocessArgs& a) {
  run_stage("preprocess", [&] {
    const Field f = field_option(a.field);
    auto r = ingest(a.corpus, f);
    if (a.raw) {
      // Unfiltered tokens for the phrase extractor.
      std::vector<TokenStream> raw;
      for (const auto& d : r.corpus.documents()) raw.push_back({d.id, f, raw_tokens(d.text(f))});
      write_token_store(raw, a.out);
      std::cout << "streams " << raw.size() << '\n';
      return;
    }
    auto stop = StopwordSet::english();
    if (!a.stopwords.empty()) stop.add_file(a.stopwords);
    CleanOptions opts;
    opts.stem = !a.no_stem;
    auto streams = preprocess_corpus(r.corpus, f, stop, opts);
    if (a.min_df > 1) {
      auto pruned = prune_rare(std::move(streams), a.min_df);
      std::cerr << "preprocess: pruned " << pruned.report.removed_terms.size() << " terms\n";
      streams = std::move(pruned.streams);
    }
    write_token_store(streams, a.out);
    std::cout << "streams " << streams.size() << '\n';
  });
}

struct PhrasesArgs {
  std::string corpus, tokens, out, field = "title";
  std::size_t max_len = 4;
};

void cmd_phrases(const PhrasesArgs& a) {
  run_stage("phrases", [&] {
    std::vector<DocPhrases> phrases;
    if (!a.tokens.empty()) {
      for (const auto& s : read_token_store(a.tokens))
        phrases.push_back({s.doc_id, extract_phrases(tag_tokens(s.tokens), a.max_len)});
    } else if (!a.corpus.empty()) {
      const Field f = field_option(a.field);
      phrases = corpus_phrases(ingest(a.corpus, f).corpus, f, a.max_len);
    } else {
      throw Error("phrases needs --tokens (raw token store) or --corpus");
    }
    write_phrase_store(phrases, a.out);
    std::cout << "documents " << phrases.size() << '\n';
  });
}

struct LsiArgs {
  std::string tokens, model, vectors, weighting = "tfidf", solver = "auto";
  int topics = 100;
  std::size_t chunksize = 0;
  double decay = 1.0;
  std::uint64_t seed = 1;
};

void cmd_train_lsi(const LsiArgs& a) {
  run_stage("train-lsi", [&] {
    auto streams = read_token_store(a.tokens);
    auto vocab = build_vocabulary(streams);
    auto m = build_matrix(streams, vocab, parse_weighting(a.weighting));
    LsiOptions opts;
    opts.chunksize = a.chunksize;
    opts.decay = a.decay;
    opts.randomized.seed = derive_seed(a.seed, "lsi");
    if (a.solver == "dense") opts.solver = SvdSolver::kDense;
    else if (a.solver == "randomized") opts.solver = SvdSolver::kRandomized;
    else if (a.solver != "auto") throw Error("unknown solver '" + a.solver + "'");
    auto model = truncated_svd(m, a.topics, opts);
    if (!a.model.empty()) model.save(a.model);
    if (!a.vectors.empty()) {
      auto store = VectorStore::dense(static_cast<std::size_t>(model.k()));
      for (std::size_t i = 0; i < streams.size(); ++i) store.add(streams[i].doc_id, model.doc_vector(i));
      store.write(a.vectors);
    }
    std::cout << "topics " << model.k() << " terms " << model.n_terms() << " docs " << model.n_docs()
              << '\n';
  });
}

struct D2vArgs {
  std::string tokens, model, vectors, average = "tfidf";
  TrainParams params;
  bool word_mode = false;
};

void cmd_train_d2v(D2vArgs a) {
  run_stage("train-d2v", [&] {
    auto streams = read_token_store(a.tokens);
    a.params.mode = a.word_mode ? EmbeddingMode::kWord : EmbeddingMode::kDocument;
    auto model = train(streams, a.params, [](int epoch, const EmbeddingModel&) {
      std::cerr << "train-d2v: epoch " << epoch + 1 << " done\n";
    });
    if (!a.model.empty()) model.save(a.model);
    if (!a.vectors.empty()) {
      auto store = VectorStore::dense(static_cast<std::size_t>(a.params.size));
      if (a.word_mode) {
        auto vocab = build_vocabulary(streams);
        auto weighting = a.average == "uniform" ? AverageWeighting::kUniform : AverageWeighting::kTfidf;
        for (const auto& s : streams) {
          bool known = std::any_of(s.tokens.begin(), s.tokens.end(),
                                   [&](const auto& t) { return model.vocab.index(t).has_value(); });
          store.add(s.doc_id, known ? average_word_vectors(model, s.tokens, weighting, &vocab)
                                    : DenseVector(static_cast<std::size_t>(a.params.size)));
        }
      } else {
        for (std::size_t i = 0; i < streams.size(); ++i) store.add(streams[i].doc_id, model.doc_vector(i));
      }
      store.write(a.vectors);
    }
    std::cout << "vocabulary " << model.vocab.size() << '\n';
  });
}

struct VectorizeArgs {
  std::string tokens, out, method = "tfidf", corpus, phrases, d2v_model;
  std::size_t top_k = 1000;
};

void cmd_vectorize(const VectorizeArgs& a) {
  run_stage("vectorize", [&] {
    auto streams = read_token_store(a.tokens);
    VectorStore store;
    if (a.method == "tfidf" || a.method == "tfidf-phrase") {
      if (a.method == "tfidf-phrase") {
        if (a.phrases.empty()) throw Error("tfidf-phrase needs --phrases");
        streams = add_top_phrases(std::move(streams), read_phrase_store(a.phrases), a.top_k);
      }
      store = tfidf_store(streams, build_vocabulary(streams));
    } else if (a.method == "tfidf-inc") {
      if (a.corpus.empty()) throw Error("tfidf-inc needs --corpus for document dates");
      auto corpus = ingest(a.corpus).corpus;
      auto vocab = build_vocabulary(streams);
      auto timeline = build_df_timeline(corpus, streams, vocab);
      store = VectorStore::sparse(vocab.size());
      for (const auto& s : streams)
        store.add(s.doc_id, incremental_tfidf_vector(s, vocab, timeline,
                                                     corpus.at(s.doc_id).date.month_index()));
    } else if (a.method == "d2v-infer") {
      if (a.d2v_model.empty()) throw Error("d2v-infer needs --d2v-model");
      auto model = EmbeddingModel::load(a.d2v_model);
      store = VectorStore::dense(static_cast<std::size_t>(model.params.size));
      for (const auto& s : streams) store.add(s.doc_id, infer_vector(model, s.tokens));
    } else {
      throw Error("unknown vectorize method '" + a.method + "'");
    }
    store.write(a.out);
    std::cout << "vectors " << store.size() << '\n';
  });
}

struct EvaluateArgs {
  std::string model, positives, strategy = "random", roc_out, corpus, negatives_file, summary_out;
  std::string method_label = "model", field_label = "title", tokens;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  bool exclude_positives = false;
  bool idf_replacement = false;
};

void cmd_evaluate(const EvaluateArgs& a) {
  run_stage("evaluate", [&] {
    if (!fs::is_regular_file(a.positives))
      throw Error("positives file '" + a.positives + "' does not exist");
    const auto strategy = parse_strategy(a.strategy);
    auto corpus = ingest(a.corpus).corpus;
    auto positives = read_pairs(a.positives);
    std::vector<IdPair> negatives;
    if (strategy == NegativeStrategy::kGiven) {
      if (a.negatives_file.empty()) throw Error("strategy 'given' needs --negatives");
      negatives = read_pairs(a.negatives_file);
    } else {
      std::span<const IdPair> exclude;
      if (a.exclude_positives) exclude = positives;
      negatives = build_negatives(corpus, a.n, strategy, a.seed, exclude);
    }
    auto bench = make_benchmark(corpus, positives, negatives, strategy);
    PairScores scores;
    if (a.idf_replacement) {
      if (a.tokens.empty()) throw Error("--idf-replacement needs --tokens");
      auto streams = read_token_store(a.tokens);
      auto vocab = build_vocabulary(streams);
      auto timeline = build_df_timeline(corpus, streams, vocab);
      scores = score_pairs(IdfReplacement{corpus, streams, vocab, timeline}, bench.pairs);
    } else {
      scores = score_pairs(VectorStore::read(a.model), bench.pairs);
    }
    auto roc = roc_auc(bench.pairs, scores.scores);
    if (!a.roc_out.empty()) write_roc_csv(roc, a.roc_out);
    SummaryRecord rec{a.method_label, a.field_label, std::string(strategy_name(strategy)), roc.auc};
    if (scores.zero_norm)
      std::cerr << "evaluate: " << scores.zero_norm << " pairs involved a zero vector\n";
    std::cout << "auc " << format_value(ParamValue(roc.auc)) << '\n' << rec.line() << '\n';
    if (!a.summary_out.empty()) {
      std::ofstream out(a.summary_out, std::ios::app);
      out << rec.line() << '\n';
    }
  });
}

struct TuneArgs {
  std::string method = "d2v", space, log, config;
  std::size_t budget = 0, init = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
};

void apply_overrides(RunConfig& c, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("override '" + kv + "' is not key=value");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

void cmd_tune(const TuneArgs& a) {
  run_stage("tune", [&] {
    RunConfig base = RunConfig::parse_file(a.config);
    apply_overrides(base, a.overrides);
    SearchSpace space;
    if (!a.space.empty()) space = SearchSpace::parse_file(a.space);
    else if (a.method == "d2v") space = default_d2v_space();
    else if (a.method == "lsi") space = default_lsi_space();
    else throw Error("--method must be lsi or d2v");
    base.method = a.method == "lsi" ? Method::kLsi : Method::kD2v;
    const std::size_t budget = a.budget ? a.budget : 10 * space.size();
    const std::size_t init = a.init ? a.init : 2 * space.size();

    std::size_t trial_no = 0;
    Objective objective = [&](const Point& x) {
      RunConfig c = base;
      c.output = (fs::path(base.output) / ("trial-" + std::to_string(trial_no++))).string();
      for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& name = space.dims()[i].name;
        const std::string key = (a.method == "lsi" && name == "num-topics") ? "lsi.topics"
                                                                            : a.method + "." + name;
        c.set(key, format_value(x[i]));
      }
      return -run_experiment(c).auc;
    };
    OptimizeOptions opts;
    opts.on_trial = [](std::size_t i, const Trial& t) {
      std::cerr << "tune: trial " << i << " y=" << format_value(ParamValue(t.y))
                << (t.failed ? " failed: " + t.message : "") << '\n';
    };
    auto log = optimize(objective, space, budget, init, a.seed, opts);
    if (!a.log.empty()) {
      std::ofstream out(a.log);
      if (!out) throw Error("cannot write log '" + a.log + "'");
      log.write_csv(space, out);
    }
    const auto& best = log.best();
    std::cout << "best";
    for (std::size_t i = 0; i < space.size(); ++i)
      std::cout << ' ' << space.dims()[i].name << '=' << format_value(best.x[i]);
    std::cout << " auc=" << format_value(ParamValue(-best.y)) << '\n';
  });
}

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
};

void cmd_run(const RunArgs& a, std::size_t threads) {
  RunConfig c = run_stage("config", [&] {
    auto c = RunConfig::parse_file(a.config);
    apply_overrides(c, a.overrides);
    return c;
  });
  if (threads) c.threads = threads;
  auto rec = run_experiment(c);
  std::cout << rec.line() << '\n';
  std::cerr << "run: wall " << rec.wall_seconds << " s, " << rec.positives << " positives, "
            << rec.negatives << " negatives\n";
}

struct SynthArgs {
  std::string out, kind = "hierarchy";
  std::uint64_t seed = 1;
};

void cmd_synth(const SynthArgs& a) {
  run_stage("synth", [&] {
    auto s = a.kind == "two-cluster" ? make_two_cluster_corpus(a.seed)
             : a.kind == "hierarchy" ? make_hierarchical_corpus({.seed = a.seed})
                                     : throw Error("--kind must be hierarchy or two-cluster");
    fs::create_directories(a.out);
    write_corpus(s.corpus, (fs::path(a.out) / "corpus.jsonl").string());
    std::ofstream pos(fs::path(a.out) / "positives.tsv");
    write_pairs(s.positives, pos);
    std::cout << "documents " << s.corpus.size() << " positives " << s.positives.size() << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document similarity vectors: TFIDF, LSI and embeddings with ROC evaluation"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  IngestArgs ia;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a JSONL corpus and write it normalized");
  ingest_cmd->add_option("--input", ia.input)->required();
  ingest_cmd->add_option("--out", ia.out)->required();
  ingest_cmd->add_option("--field", ia.field);

  PreprocessArgs pa;
  auto* pre_cmd = app.add_subcommand("preprocess", "Clean one text field into a token store");
  pre_cmd->add_option("--corpus", pa.corpus)->required();
  pre_cmd->add_option("--out", pa.out)->required();
  pre_cmd->add_option("--field", pa.field);
  pre_cmd->add_option("--stopwords", pa.stopwords, "Extra stopword file");
  pre_cmd->add_option("--min-df", pa.min_df);
  pre_cmd->add_flag("--no-stem", pa.no_stem);
  pre_cmd->add_flag("--raw", pa.raw, "Write unfiltered tokens for phrase extraction");

  PhrasesArgs pha;
  auto* phr_cmd = app.add_subcommand("phrases", "Extract noun phrases into a phrase store");
  phr_cmd->add_option("--tokens", pha.tokens, "Raw token store (preprocess --raw)");
  phr_cmd->add_option("--corpus", pha.corpus);
  phr_cmd->add_option("--out", pha.out)->required();
  phr_cmd->add_option("--field", pha.field);
  phr_cmd->add_option("--max-len", pha.max_len);

  LsiArgs la;
  auto* lsi_cmd = app.add_subcommand("train-lsi", "Factor a token store with truncated SVD");
  lsi_cmd->add_option("--tokens", la.tokens)->required();
  lsi_cmd->add_option("--topics", la.topics);
  lsi_cmd->add_option("--chunksize", la.chunksize);
  lsi_cmd->add_option("--decay", la.decay);
  lsi_cmd->add_option("--weighting", la.weighting);
  lsi_cmd->add_option("--solver", la.solver);
  lsi_cmd->add_option("--seed", la.seed);
  lsi_cmd->add_option("--model", la.model);
  lsi_cmd->add_option("--vectors", la.vectors);

  D2vArgs da;
  auto* d2v_cmd = app.add_subcommand("train-d2v", "Train document (or word) embeddings");
  d2v_cmd->add_option("--tokens", da.tokens)->required();
  d2v_cmd->add_option("--dm", da.params.dm);
  d2v_cmd->add_option("--hs", da.params.hs);
  d2v_cmd->add_option("--size", da.params.size);
  d2v_cmd->add_option("--window", da.params.window);
  d2v_cmd->add_option("--sample", da.params.sample);
  d2v_cmd->add_option("--iter", da.params.iter);
  d2v_cmd->add_option("--negative", da.params.negative);
  d2v_cmd->add_option("--alpha", da.params.alpha0);
  d2v_cmd->add_option("--seed", da.params.seed);
  d2v_cmd->add_option("--workers", da.params.workers);
  d2v_cmd->add_flag("--word-mode", da.word_mode, "Word vectors (dm=1 CBOW, dm=0 skip-gram)");
  d2v_cmd->add_option("--average", da.average, "uniform or tfidf (word mode vectors)");
  d2v_cmd->add_option("--model", da.model);
  d2v_cmd->add_option("--vectors", da.vectors);

  VectorizeArgs va;
  auto* vec_cmd = app.add_subcommand("vectorize", "Build a vector store from a token store");
  vec_cmd->add_option("--tokens", va.tokens)->required();
  vec_cmd->add_option("--out", va.out)->required();
  vec_cmd->add_option("--method", va.method, "tfidf, tfidf-inc, tfidf-phrase or d2v-infer");
  vec_cmd->add_option("--corpus", va.corpus);
  vec_cmd->add_option("--phrases", va.phrases);
  vec_cmd->add_option("--top-k", va.top_k);
  vec_cmd->add_option("--d2v-model", va.d2v_model);

  EvaluateArgs ea;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a pair benchmark and compute ROC/AUC");
  eval_cmd->add_option("--model", ea.model, "Vector store");
  eval_cmd->add_option("--corpus", ea.corpus)->required();
  eval_cmd->add_option("--positives", ea.positives)->required();
  eval_cmd->add_option("--negative-strategy", ea.strategy);
  eval_cmd->add_option("--negatives", ea.negatives_file, "Negative pairs for strategy 'given'");
  eval_cmd->add_option("--n", ea.n);
  eval_cmd->add_option("--seed", ea.seed);
  eval_cmd->add_option("--roc-out", ea.roc_out);
  eval_cmd->add_option("--summary-out", ea.summary_out);
  eval_cmd->add_option("--method-name", ea.method_label);
  eval_cmd->add_option("--field-name", ea.field_label);
  eval_cmd->add_flag("--exclude-positives", ea.exclude_positives);
  eval_cmd->add_flag("--idf-replacement", ea.idf_replacement);
  eval_cmd->add_option("--tokens", ea.tokens, "Token store for --idf-replacement");

  TuneArgs ta;
  auto* tune_cmd = app.add_subcommand("tune", "Bayesian optimization of LSI or D2V hyper-parameters");
  tune_cmd->add_option("--method", ta.method)->check(CLI::IsMember({"lsi", "d2v"}));
  tune_cmd->add_option("--config", ta.config, "Base run configuration")->required();
  tune_cmd->add_option("--space", ta.space);
  tune_cmd->add_option("--budget", ta.budget);
  tune_cmd->add_option("--init", ta.init);
  tune_cmd->add_option("--seed", ta.seed);
  tune_cmd->add_option("--log", ta.log);
  tune_cmd->add_option("--set", ta.overrides, "section.key=value");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline from a configuration file");
  run_cmd->add_option("--config", ra.config)->required();
  run_cmd->add_option("--set", ra.overrides, "section.key=value");

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus and positive pairs");
  synth_cmd->add_option("--out", sa.out)->required();
  synth_cmd->add_option("--kind", sa.kind);
  synth_cmd->add_option("--seed", sa.seed);

  CLI11_PARSE(app, argc, argv);
  if (threads) set_max_threads(threads);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "ingest") cmd_ingest(ia);
    else if (name == "preprocess") cmd_preprocess(pa);
    else if (name == "phrases") cmd_phrases(pha);
    else if (name == "train-lsi") cmd_train_lsi(la);
    else if (name == "train-d2v") cmd_train_d2v(da);
    else if (name == "vectorize") cmd_vectorize(va);
    else if (name == "evaluate") cmd_evaluate(ea);
    else if (name == "tune") cmd_tune(ta);
    else if (name == "run") cmd_run(ra, threads);
    else if (name == "synth") cmd_synth(sa);
  } catch (const std::exception& e) {
    std::cerr << "simvec: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
