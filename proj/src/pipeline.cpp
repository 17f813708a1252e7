#include "simvec/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "simvec/d2v.hpp"
#include "simvec/eval.hpp"
#include "simvec/lsi.hpp"
#include "simvec/parallel.hpp"
#include "simvec/phrases.hpp"
#include "simvec/rng.hpp"
#include "simvec/tfidf.hpp"
#include "simvec/tune.hpp"

namespace fs = std::filesystem;

namespace simvec {

std::vector<TokenStream> preprocess_corpus(const Corpus& corpus, Field field,
                                           const StopwordSet& stopwords,
                                           const CleanOptions& options) {
  std::vector<TokenStream> out(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    const auto& d = corpus[i];
    out[i] = {d.id, field, clean_text(d.text(field), stopwords, options)};
  });
  return out;
}

std::vector<DocPhrases> corpus_phrases(const Corpus& corpus, Field field, std::size_t max_len) {
  std::vector<DocPhrases> out(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    const auto& d = corpus[i];
    auto tokens = raw_tokens(d.text(field));
    out[i] = {d.id, extract_phrases(tag_tokens(tokens), max_len)};
  });
  return out;
}

std::vector<TokenStream> add_top_phrases(std::vector<TokenStream> streams,
                                         std::span<const DocPhrases> phrases, std::size_t top_k) {
  if (streams.size() != phrases.size()) throw Error("phrase store does not match token store");
  std::vector<PhraseCounts> counts;
  counts.reserve(phrases.size());
  for (const auto& p : phrases) counts.push_back(p.counts);
  const auto allowed = top_phrases(counts, top_k);
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (streams[i].doc_id != phrases[i].doc_id)
      throw Error("phrase store order differs at '" + phrases[i].doc_id + "'");
    streams[i] = augment_with_phrases(std::move(streams[i]), filter_phrases(counts[i], allowed));
  }
  return streams;
}

VectorStore tfidf_store(std::span<const TokenStream> streams, const Vocabulary& vocab) {
  auto store = VectorStore::sparse(vocab.size());
  std::vector<SparseVector> vecs(streams.size());
  parallel_for(streams.size(), [&](std::size_t i) { vecs[i] = tfidf_vector(streams[i], vocab); });
  for (std::size_t i = 0; i < streams.size(); ++i) store.add(streams[i].doc_id, std::move(vecs[i]));
  return store;
}

std::string SummaryRecord::line() const {
  return method + "," + field + "," + strategy + "," + format_value(ParamValue(auc));
}

namespace {

void require_file(const std::string& what, const std::string& path) {
  if (path.empty() || !fs::is_regular_file(path))
    throw StageError("config", what + " '" + path + "' does not exist");
}

}  // namespace

SummaryRecord run_experiment(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  run_stage("config", [&] { config.validate(); });
  require_file("corpus file", config.corpus);
  require_file("positives file", config.positives);
  if (config.strategy == NegativeStrategy::kGiven)
    require_file("negatives file", config.negatives_file);
  if (config.threads != 0) set_max_threads(config.threads);
  const fs::path out_dir = config.output;
  run_stage("config", [&] { fs::create_directories(out_dir); });
  {
    std::ofstream manifest(out_dir / "config.ini");
    config.serialize(manifest);
  }

  const Corpus corpus = run_stage("ingest", [&] {
    auto r = ingest(config.corpus, config.field);
    if (r.corpus.empty()) throw Error("no documents in '" + config.corpus + "'");
    return std::move(r.corpus);
  });

  std::vector<TokenStream> streams = run_stage("preprocess", [&] {
    CleanOptions opts;
    opts.stem = config.stem;
    auto s = preprocess_corpus(corpus, config.field, StopwordSet::english(), opts);
    if (config.min_df > 1) s = prune_rare(std::move(s), config.min_df).streams;
    write_token_store(s, (out_dir / "tokens.tsv").string());
    return s;
  });

  if (config.method == Method::kTfidfPhrase) {
    streams = run_stage("phrases", [&] {
      auto phrases = corpus_phrases(corpus, config.field, config.phrase_max_len);
      write_phrase_store(phrases, (out_dir / "phrases.tsv").string());
      return add_top_phrases(std::move(streams), phrases, config.phrase_top_k);
    });
  }

  // Needed for scoring in the incremental method.
  std::optional<Vocabulary> vocab;
  std::optional<DfTimeline> timeline;

  const VectorStore store = run_stage("vectorize", [&]() -> VectorStore {
    switch (config.method) {
      case Method::kTfidf:
      case Method::kTfidfPhrase: {
        vocab = build_vocabulary(streams);
        return tfidf_store(streams, *vocab);
      }
      case Method::kTfidfIncremental: {
        vocab = build_vocabulary(streams);
        timeline = build_df_timeline(corpus, streams, *vocab);
        auto s = VectorStore::sparse(vocab->size());
        for (const auto& st : streams)
          s.add(st.doc_id, incremental_tfidf_vector(st, *vocab, *timeline,
                                                    corpus.at(st.doc_id).date.month_index()));
        return s;
      }
      case Method::kLsi: {
        auto v = build_vocabulary(streams);
        auto m = build_matrix(streams, v, config.lsi_weighting);
        LsiOptions opts;
        opts.solver = config.lsi_solver;
        opts.chunksize = config.lsi_chunksize;
        opts.decay = config.lsi_decay;
        opts.randomized.seed = derive_seed(config.seed, "lsi");
        auto model = truncated_svd(m, config.lsi_topics, opts);
        model.save((out_dir / "lsi.bin").string());
        auto s = VectorStore::dense(static_cast<std::size_t>(model.k()));
        for (std::size_t i = 0; i < streams.size(); ++i) s.add(streams[i].doc_id, model.doc_vector(i));
        return s;
      }
      case Method::kD2v: {
        TrainParams p = config.d2v;
        p.mode = EmbeddingMode::kDocument;
        p.seed = derive_seed(config.seed, "d2v");
        auto model = train(streams, p);
        model.save((out_dir / "d2v.bin").string());
        auto s = VectorStore::dense(static_cast<std::size_t>(p.size));
        for (std::size_t i = 0; i < streams.size(); ++i) s.add(streams[i].doc_id, model.doc_vector(i));
        return s;
      }
      case Method::kW2vAvg: {
        TrainParams p = config.d2v;
        p.mode = EmbeddingMode::kWord;
        p.seed = derive_seed(config.seed, "w2v");
        auto model = train(streams, p);
        model.save((out_dir / "w2v.bin").string());
        auto v = build_vocabulary(streams);
        auto s = VectorStore::dense(static_cast<std::size_t>(p.size));
        for (const auto& st : streams) {
          const bool known = std::any_of(st.tokens.begin(), st.tokens.end(),
                                         [&](const auto& t) { return model.vocab.index(t).has_value(); });
          // Documents emptied by preprocessing get the zero vector.
          s.add(st.doc_id, known ? average_word_vectors(model, st.tokens, config.w2v_weighting, &v)
                                 : DenseVector(static_cast<std::size_t>(p.size)));
        }
        return s;
      }
    }
    throw Error("unhandled method");
  });
  run_stage("vectorize", [&] { store.write((out_dir / "vectors.tsv").string()); });

  return run_stage("evaluate", [&] {
    const auto positives = read_pairs(config.positives);
    std::vector<IdPair> negatives;
    if (config.strategy == NegativeStrategy::kGiven) {
      negatives = read_pairs(config.negatives_file);
    } else {
      std::span<const IdPair> exclude;
      if (config.exclude_positives) exclude = positives;
      negatives = build_negatives(corpus, config.negatives, config.strategy,
                                  derive_seed(config.seed, "negatives"), exclude);
    }
    const auto bench = make_benchmark(corpus, positives, negatives, config.strategy);
    PairScores scores =
        config.method == Method::kTfidfIncremental
            ? score_pairs(IdfReplacement{corpus, streams, *vocab, *timeline}, bench.pairs)
            : score_pairs(store, bench.pairs);
    const auto roc = roc_auc(bench.pairs, scores.scores);
    write_roc_csv(roc, (out_dir / "roc.csv").string());

    SummaryRecord rec;
    rec.method = method_name(config.method);
    rec.field = field_name(config.field);
    rec.strategy = strategy_name(config.strategy);
    rec.auc = roc.auc;
    rec.positives = positives.size();
    rec.negatives = negatives.size();
    rec.zero_norm_pairs = scores.zero_norm;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream summary(out_dir / "summary.csv");
    summary << "method,field,strategy,auc\n" << rec.line() << '\n';
    return rec;
  });
}

}  // namespace simvec
