#include "simvec/preprocess.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "simvec/error.hpp"
#include "simvec/porter.hpp"

namespace simvec {

namespace {

// General English stopword list (318 words).
constexpr std::string_view kEnglishStopwords[] = {
    "a", "about", "above", "across", "after", "afterwards", "again", "against", "all",
    "almost", "alone", "along", "already", "also", "although", "always", "am", "among",
    "amongst", "amoungst", "amount", "an", "and", "another", "any", "anyhow", "anyone",
    "anything", "anyway", "anywhere", "are", "around", "as", "at", "back", "be",
    "became", "because", "become", "becomes", "becoming", "been", "before",
    "beforehand", "behind", "being", "below", "beside", "besides", "between", "beyond",
    "bill", "both", "bottom", "but", "by", "call", "can", "cannot", "cant", "co", "con",
    "could", "couldnt", "cry", "de", "describe", "detail", "do", "done", "down", "due",
    "during", "each", "eg", "eight", "either", "eleven", "else", "elsewhere", "empty",
    "enough", "etc", "even", "ever", "every", "everyone", "everything", "everywhere",
    "except", "few", "fifteen", "fifty", "fill", "find", "fire", "first", "five", "for",
    "former", "formerly", "forty", "found", "four", "from", "front", "full", "further",
    "get", "give", "go", "had", "has", "hasnt", "have", "he", "hence", "her", "here",
    "hereafter", "hereby", "herein", "hereupon", "hers", "herself", "him", "himself",
    "his", "how", "however", "hundred", "i", "ie", "if", "in", "inc", "indeed",
    "interest", "into", "is", "it", "its", "itself", "keep", "last", "latter",
    "latterly", "least", "less", "ltd", "made", "many", "may", "me", "meanwhile",
    "might", "mill", "mine", "more", "moreover", "most", "mostly", "move", "much",
    "must", "my", "myself", "name", "namely", "neither", "never", "nevertheless",
    "next", "nine", "no", "nobody", "none", "noone", "nor", "not", "nothing", "now",
    "nowhere", "of", "off", "often", "on", "once", "one", "only", "onto", "or", "other",
    "others", "otherwise", "our", "ours", "ourselves", "out", "over", "own", "part",
    "per", "perhaps", "please", "put", "rather", "re", "same", "see", "seem", "seemed",
    "seeming", "seems", "serious", "several", "she", "should", "show", "side", "since",
    "sincere", "six", "sixty", "so", "some", "somehow", "someone", "something",
    "sometime", "sometimes", "somewhere", "still", "such", "system", "take", "ten",
    "than", "that", "the", "their", "them", "themselves", "then", "thence", "there",
    "thereafter", "thereby", "therefore", "therein", "thereupon", "these", "they",
    "thick", "thin", "third", "this", "those", "though", "three", "through",
    "throughout", "thru", "thus", "to", "together", "too", "top", "toward", "towards",
    "twelve", "twenty", "two", "un", "under", "until", "up", "upon", "us", "very",
    "via", "was", "we", "well", "were", "what", "whatever", "when", "whence",
    "whenever", "where", "whereafter", "whereas", "whereby", "wherein", "whereupon",
    "wherever", "whether", "which", "while", "whither", "who", "whoever", "whole",
    "whom", "whose", "why", "will", "with", "within", "without", "would", "yet", "you",
    "your", "yours", "yourself", "yourselves",
};

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Bytes >= 0x80 stay inside tokens so that words carrying non-ASCII
// characters are dropped whole instead of being split into fragments.
bool is_token_byte(unsigned char c) { return is_ascii_alnum(c) || c >= 0x80; }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string strip_markup(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '<') {
      auto close = in.find('>', i + 1);
      if (close != std::string_view::npos) {
        out.push_back(' ');
        i = close + 1;
        continue;
      }
    }
    if (in[i] == '&') {
      constexpr std::array<std::pair<std::string_view, char>, 3> kEntities{
          {{"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}}};
      bool decoded = false;
      for (auto [name, ch] : kEntities) {
        if (in.substr(i, name.size()) == name) {
          out.push_back(ch);
          i += name.size();
          decoded = true;
          break;
        }
      }
      if (decoded) continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool looks_like_address(std::string_view chunk) {
  if (chunk.find("://") != std::string_view::npos) return true;
  std::string head;
  for (char c : chunk.substr(0, 4)) head.push_back(lower(c));
  if (head == "www.") return true;
  auto at = chunk.find('@');
  return at != std::string_view::npos && at > 0 &&
         chunk.find('.', at + 1) != std::string_view::npos;
}

// Removes whitespace-delimited chunks that are URLs or e-mail addresses.
std::string strip_addresses(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (is_space(in[i])) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < in.size() && !is_space(in[j])) ++j;
    std::string_view chunk = in.substr(i, j - i);
    if (!looks_like_address(chunk)) out.append(chunk);
    i = j;
  }
  return out;
}

bool is_nucleotide_run(std::string_view tok) {
  if (tok.size() < 10) return false;
  return std::all_of(tok.begin(), tok.end(), [](char c) {
    c = lower(c);
    return c == 'a' || c == 'c' || c == 'g' || c == 't';
  });
}

template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && is_token_byte(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) fn(text.substr(i, j - i));
    i = j;
  }
}

constexpr std::size_t kMinTokenLength = 3;

}  // namespace

StopwordSet StopwordSet::english() {
  StopwordSet s;
  for (auto w : kEnglishStopwords) s.add(w);
  return s;
}

void StopwordSet::add(std::string_view word) {
  std::string w;
  for (char c : word) w.push_back(lower(c));
  if (w.empty()) return;
  stems_.insert(porter_stem(w));
}

void StopwordSet::add_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read stopword file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    add(std::string_view(line).substr(b, e - b + 1));
  }
}

std::string stem(std::string_view word) { return porter_stem(word); }

std::vector<std::string> raw_tokens(std::string_view raw) {
  std::vector<std::string> out;
  for_each_token(raw, [&](std::string_view tok) { out.emplace_back(tok); });
  return out;
}

std::vector<std::string> clean_text(std::string_view raw, const StopwordSet& stopwords,
                                    const CleanOptions& options) {
  std::string text = strip_addresses(strip_markup(raw));
  std::vector<std::string> out;
  for_each_token(text, [&](std::string_view tok) {
    if (tok.size() < kMinTokenLength || is_nucleotide_run(tok)) return;
    std::string word;
    word.reserve(tok.size());
    for (char c : tok) {
      auto u = static_cast<unsigned char>(c);
      if (u >= 0x80 || (c >= '0' && c <= '9')) return;
      word.push_back(lower(c));
    }
    if (options.stem) word = porter_stem(word);
    // Stemming can shorten a word below the minimum ("ies" -> "i").
    if (word.size() < kMinTokenLength) return;
    if (stopwords.contains_stem(word)) return;
    out.push_back(std::move(word));
  });
  return out;
}

void DfCounter::add(const std::vector<std::string>& tokens) {
  ++n_docs_;
  std::vector<const std::string*> uniq;
  uniq.reserve(tokens.size());
  for (const auto& t : tokens) uniq.push_back(&t);
  std::sort(uniq.begin(), uniq.end(), [](auto* a, auto* b) { return *a < *b; });
  uniq.erase(std::unique(uniq.begin(), uniq.end(), [](auto* a, auto* b) { return *a == *b; }),
             uniq.end());
  for (const auto* t : uniq) ++df_[*t];
}

void DfCounter::merge(const DfCounter& other) {
  n_docs_ += other.n_docs_;
  for (const auto& [term, n] : other.df_) df_[term] += n;
}

std::uint32_t DfCounter::df(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

PruneResult prune_rare(std::vector<TokenStream> streams, std::uint32_t min_df) {
  if (min_df < 1) throw Error("prune_rare: min_df must be >= 1");
  PruneResult result;
  result.report.min_df = min_df;
  DfCounter counter;
  for (const auto& s : streams) counter.add(s.tokens);
  for (const auto& [term, n] : counter.counts())
    if (n < min_df) result.report.removed_terms.insert(term);
  if (!result.report.removed_terms.empty()) {
    for (auto& s : streams)
      std::erase_if(s.tokens,
                    [&](const std::string& t) { return result.report.removed_terms.contains(t); });
  }
  result.streams = std::move(streams);
  return result;
}

}  // namespace simvec
