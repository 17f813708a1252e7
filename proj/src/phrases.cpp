#include "simvec/phrases.hpp"

#include <algorithm>
#include <array>

#include "simvec/error.hpp"

namespace simvec {

char tag_letter(Tag t) {
  constexpr std::array<char, kTagCount> kLetters{'A', 'N', 'P', 'D', 'O'};
  return kLetters[static_cast<std::size_t>(t)];
}

const Lexicon& builtin_lexicon() {
  static const Lexicon lexicon = [] {
    Lexicon lx;
    for (auto w : {"the", "a", "an", "this", "that", "these", "those", "each", "every",
                   "some", "any", "no", "all", "both", "either", "neither", "its",
                   "their", "his", "her", "our", "your", "my", "another", "such"})
      lx.emplace(w, Tag::kDet);
    for (auto w : {"of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
                   "onto", "over", "under", "between", "through", "about", "against",
                   "during", "without", "within", "among", "across", "along", "upon",
                   "via", "per", "after", "before", "behind", "below", "above", "near",
                   "around", "beyond", "toward", "towards", "throughout", "beneath"})
      lx.emplace(w, Tag::kPrep);
    for (auto w : {"and", "or", "but", "nor", "not", "is", "are", "was", "were", "be",
                   "been", "being", "has", "have", "had", "do", "does", "did", "can",
                   "could", "may", "might", "must", "shall", "should", "will", "would",
                   "it", "they", "he", "she", "we", "you", "i", "which", "who", "whom",
                   "whose", "where", "when", "while", "if", "then", "than", "thus",
                   "also", "very", "so", "as", "wherein", "whereby", "thereof",
                   "therein", "said"})
      lx.emplace(w, Tag::kOther);
    for (auto w : {"fast", "slow", "new", "old", "high", "low", "large", "small", "big",
                   "good", "long", "short", "wide", "narrow", "light", "heavy", "main",
                   "same", "different", "first", "second", "third", "upper", "lower",
                   "inner", "outer", "front", "rear", "hot", "cold", "thin", "thick",
                   "open", "closed", "single", "multiple", "several", "various",
                   "digital", "neural", "magnetic", "electric", "optical", "mobile",
                   "wireless", "portable", "flexible", "automatic"})
      lx.emplace(w, Tag::kAdj);
    return lx;
  }();
  return lexicon;
}

namespace {

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 && w.substr(w.size() - suffix.size()) == suffix;
}

Tag guess_tag(std::string_view w) {
  for (auto s : {"al", "ous", "ive"})
    if (ends_with(w, s)) return Tag::kAdj;
  for (auto s : {"ment", "tion", "ness", "ity"})
    if (ends_with(w, s)) return Tag::kNoun;
  return Tag::kNoun;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens,
                                    const Lexicon& lexicon) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    std::string key = to_lower(tok);
    auto it = lexicon.find(key);
    out.push_back({tok, it != lexicon.end() ? it->second : guess_tag(key)});
  }
  return out;
}

// States:
//   0  head modifiers (Adj|Noun)*            [start]
//   1  just read a phrase-final Noun         [accepting]
//   2  read Prep, now in Det*
//   3  tail modifiers (Adj|Noun)*
NounPhraseAutomaton::StateSet NounPhraseAutomaton::step(StateSet states, Tag tag) const {
  constexpr StateSet q0 = 1u << 0, q1 = 1u << 1, q2 = 1u << 2, q3 = 1u << 3;
  StateSet next = 0;
  switch (tag) {
    case Tag::kAdj:
      if (states & q0) next |= q0;
      if (states & (q2 | q3)) next |= q3;
      break;
    case Tag::kNoun:
      if (states & q0) next |= q0 | q1;
      if (states & (q2 | q3)) next |= q3 | q1;
      break;
    case Tag::kPrep:
      if (states & q1) next |= q2;
      break;
    case Tag::kDet:
      if (states & q2) next |= q2;
      break;
    case Tag::kOther:
      break;
  }
  return next;
}

bool NounPhraseAutomaton::accepts(std::span<const Tag> tags) const {
  StateSet s = start();
  for (Tag t : tags) {
    s = step(s, t);
    if (s == 0) return false;
  }
  return accepting(s);
}

std::vector<PhraseSpan> match_spans(std::span<const Tag> tags, std::size_t max_len) {
  if (max_len < 2) throw Error("match_spans: max_len must be >= 2");
  NounPhraseAutomaton fsa;
  std::vector<PhraseSpan> spans;
  for (std::size_t begin = 0; begin < tags.size(); ++begin) {
    auto states = fsa.start();
    for (std::size_t len = 1; len <= max_len && begin + len <= tags.size(); ++len) {
      states = fsa.step(states, tags[begin + len - 1]);
      if (states == 0) break;
      if (len >= 2 && fsa.accepting(states)) spans.push_back({begin, len});
    }
  }
  return spans;
}

PhraseCounts extract_phrases(std::span<const TaggedToken> tagged, std::size_t max_len) {
  std::vector<Tag> tags;
  tags.reserve(tagged.size());
  for (const auto& t : tagged) tags.push_back(t.tag);
  PhraseCounts counts;
  for (const auto& span : match_spans(tags, max_len)) {
    std::string joined;
    for (std::size_t i = span.begin; i < span.begin + span.length; ++i) {
      if (i > span.begin) joined.push_back('_');
      joined += to_lower(tagged[i].token);
    }
    ++counts[joined];
  }
  return counts;
}

std::vector<std::string> top_phrases(std::span<const PhraseCounts> per_doc, std::size_t k) {
  std::map<std::string, std::uint64_t> total;
  for (const auto& doc : per_doc)
    for (const auto& [p, c] : doc) total[p] += c;
  std::vector<std::pair<std::string, std::uint64_t>> ranked(total.begin(), total.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (k != 0 && ranked.size() > k) ranked.resize(k);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& [p, c] : ranked) out.push_back(std::move(p));
  std::sort(out.begin(), out.end());
  return out;
}

PhraseCounts filter_phrases(const PhraseCounts& counts,
                            std::span<const std::string> allowed_sorted) {
  PhraseCounts out;
  for (const auto& [p, c] : counts)
    if (std::binary_search(allowed_sorted.begin(), allowed_sorted.end(), p)) out.emplace(p, c);
  return out;
}

}  // namespace simvec
