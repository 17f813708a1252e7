#include "simvec/synth.hpp"

#include <algorithm>
#include <unordered_set>

#include "simvec/error.hpp"
#include "simvec/preprocess.hpp"
#include "simvec/rng.hpp"

namespace simvec {

std::vector<std::string> pseudo_words(std::size_t n, std::uint64_t seed) {
  static constexpr std::string_view kOnset = "bdfgklmnprtvz";
  static constexpr std::string_view kVowel = "aiou";
  static constexpr std::string_view kCoda = "kmnprtx";
  const auto stopwords = StopwordSet::english();
  Rng rng(seed);
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 200 * n + 10000) throw Error("pseudo_words: vocabulary space exhausted");
    std::string w;
    const int syllables = 2 + static_cast<int>(rng.below(2));
    for (int s = 0; s < syllables; ++s) {
      w += kOnset[rng.below(kOnset.size())];
      w += kVowel[rng.below(kVowel.size())];
    }
    w += kCoda[rng.below(kCoda.size())];
    if (stem(w) != w || stopwords.contains_stem(w) || !seen.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

Date random_date(Rng& rng) {
  Date d;
  d.year = 2000 + static_cast<int>(rng.below(6));
  d.month = 1 + static_cast<int>(rng.below(12));
  d.day = 1 + static_cast<int>(rng.below(28));
  return d;
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

std::string make_id(const char* prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  return prefix + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

}  // namespace

SyntheticCorpus make_hierarchical_corpus(const HierarchyOptions& o) {
  if (o.classes < 1 || o.subclasses < 1 || o.docs_per_subclass < 2 || o.doc_length < 1 ||
      o.duplicates_per_subclass < 0 || 2 * o.duplicates_per_subclass > o.docs_per_subclass)
    throw Error("invalid hierarchy options");
  Rng rng(derive_seed(o.seed, "synth"));
  const auto n_class_words = static_cast<std::size_t>(o.classes * o.class_vocab);
  const auto n_sub_words = static_cast<std::size_t>(o.classes * o.subclasses * o.subclass_vocab);
  auto words = pseudo_words(static_cast<std::size_t>(o.global_vocab) + n_class_words + n_sub_words,
                            derive_seed(o.seed, "words"));
  auto global_begin = words.begin();
  auto class_begin = global_begin + o.global_vocab;
  auto sub_begin = class_begin + static_cast<std::ptrdiff_t>(n_class_words);

  SyntheticCorpus out;
  std::vector<Document> docs;
  std::size_t next_id = 0;
  for (int c = 0; c < o.classes; ++c) {
    for (int s = 0; s < o.subclasses; ++s) {
      const auto cls = class_begin + c * o.class_vocab;
      const auto sub = sub_begin + (c * o.subclasses + s) * o.subclass_vocab;
      auto draw = [&]() -> const std::string& {
        const double u = rng.uniform();
        if (u < o.p_subclass) return sub[static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(o.subclass_vocab)))];
        if (u < o.p_subclass + o.p_class) return cls[static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(o.class_vocab)))];
        return global_begin[static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(o.global_vocab)))];
      };
      auto make_doc = [&](std::vector<std::string> text) {
        Document d;
        d.id = make_id("S", next_id++);
        d.date = random_date(rng);
        d.main_class = "C" + std::to_string(c);
        d.subclass = d.main_class + "/" + std::to_string(s);
        d.title = d.abstract = d.description = join(text);
        docs.push_back(d);
        return d.id;
      };
      const int originals = o.docs_per_subclass - o.duplicates_per_subclass;
      std::vector<std::vector<std::string>> texts;
      std::vector<std::string> ids;
      for (int i = 0; i < originals; ++i) {
        std::vector<std::string> text;
        for (int t = 0; t < o.doc_length; ++t) text.push_back(draw());
        ids.push_back(make_doc(text));
        texts.push_back(std::move(text));
      }
      for (int i = 0; i < o.duplicates_per_subclass; ++i) {
        const double keep = rng.uniform(o.keep_min, o.keep_max);
        auto text = texts[static_cast<std::size_t>(i)];
        for (auto& w : text)
          if (rng.uniform() >= keep) w = draw();
        auto id = make_doc(std::move(text));
        out.positives.emplace_back(ids[static_cast<std::size_t>(i)], id);
      }
    }
  }
  out.corpus = Corpus(std::move(docs));
  return out;
}

SyntheticCorpus make_two_cluster_corpus(std::uint64_t seed, int docs_per_cluster) {
  HierarchyOptions o;
  o.classes = 2;
  o.subclasses = 1;
  o.docs_per_subclass = docs_per_cluster;
  o.duplicates_per_subclass = docs_per_cluster / 4;
  o.global_vocab = 0;
  o.class_vocab = 0;
  o.subclass_vocab = 150;
  o.p_subclass = 1.0;
  o.p_class = 0.0;
  o.keep_min = 0.6;
  o.keep_max = 0.9;
  o.seed = seed;
  return make_hierarchical_corpus(o);
}

}  // namespace simvec
