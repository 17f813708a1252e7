#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simvec {

enum class Tag : std::uint8_t { kAdj, kNoun, kPrep, kDet, kOther };

inline constexpr std::size_t kTagCount = 5;

// One-letter code used in tag strings: A N P D O.
char tag_letter(Tag t);

struct TaggedToken {
  std::string token;
  Tag tag = Tag::kOther;
};

using Lexicon = std::unordered_map<std::string, Tag>;

// Closed-class words (determiners, prepositions, conjunctions, pronouns,
// auxiliaries) plus a small adjective seed list.
const Lexicon& builtin_lexicon();

// Lexicon lookup on the lowercased token, then suffix rules
// (-al/-ous/-ive -> Adj, -ment/-tion/-ness/-ity -> Noun), then Noun.
std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens,
                                    const Lexicon& lexicon = builtin_lexicon());

// Finite automaton for the simple noun-phrase grammar
//   (Adj|Noun)* Noun ( Prep Det* (Adj|Noun)* Noun )*
// simulated as a set of active states.
class NounPhraseAutomaton {
 public:
  using StateSet = std::uint8_t;

  StateSet start() const { return kStart; }
  StateSet step(StateSet states, Tag tag) const;
  bool accepting(StateSet states) const { return (states & kAccept) != 0; }
  bool accepts(std::span<const Tag> tags) const;

 private:
  static constexpr StateSet kStart = 1u << 0;
  static constexpr StateSet kAccept = 1u << 1;
};

struct PhraseSpan {
  std::size_t begin = 0;
  std::size_t length = 0;
  bool operator==(const PhraseSpan&) const = default;
};

// Every span of length 2..max_len accepted by the automaton, nested and
// overlapping ones included, ordered by (begin, length).
std::vector<PhraseSpan> match_spans(std::span<const Tag> tags, std::size_t max_len);

// Joined phrase ("fast_neural_network", lowercased) -> occurrences.
using PhraseCounts = std::map<std::string, std::uint32_t>;

PhraseCounts extract_phrases(std::span<const TaggedToken> tagged, std::size_t max_len = 4);

// The k phrases with the highest total count across documents (ties broken
// lexicographically). k = 0 keeps everything.
std::vector<std::string> top_phrases(std::span<const PhraseCounts> per_doc, std::size_t k);

// Keeps only phrases in `allowed`.
PhraseCounts filter_phrases(const PhraseCounts& counts,
                            std::span<const std::string> allowed_sorted);

}  // namespace simvec
