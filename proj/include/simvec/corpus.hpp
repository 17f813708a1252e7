#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simvec {

// Calendar date, validated on construction through parse().
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  // Strict ISO YYYY-MM-DD; nullopt for anything else or an impossible date.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;
  // Months since year 0; consecutive calendar months differ by one.
  std::int32_t month_index() const { return year * 12 + (month - 1); }

  auto operator<=>(const Date&) const = default;
};

enum class Field { kTitle, kAbstract, kDescription, kAll };

Field parse_field(std::string_view name);
std::string_view field_name(Field f);

struct Document {
  std::string id;
  Date date;
  std::string main_class;
  std::string subclass;
  std::string title;
  std::string abstract;
  std::string description;

  // Text of one field; kAll joins the three with single spaces.
  std::string text(Field f) const;
  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws simvec::Error on a duplicate id.
  explicit Corpus(std::vector<Document> docs);

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const std::vector<Document>& documents() const { return docs_; }
  const Document& operator[](std::size_t i) const { return docs_[i]; }

  const Document* find(std::string_view id) const;
  std::optional<std::size_t> position(std::string_view id) const;
  // Throws simvec::Error naming the id when absent.
  const Document& at(std::string_view id) const;

  bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct IngestResult {
  Corpus corpus;
  std::size_t skipped = 0;
  // One message per skipped line, "line N: reason".
  std::vector<std::string> diagnostics;
};

// Reads one JSON object per line (keys id, date, main_class, subclass,
// title, abstract, description). Malformed lines are skipped with a
// diagnostic; an unreadable file or duplicate id throws simvec::Error.
// With a single-field selector the other text fields are left empty.
IngestResult ingest(const std::string& path, Field selector = Field::kAll);
IngestResult ingest(std::istream& in, Field selector = Field::kAll);

// Canonical store: one compact JSON object per line, fixed key order.
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::string& path);

// Ascending (date, id). Stable for equal keys, which cannot occur since
// ids are unique.
std::vector<const Document*> by_date(const Corpus& corpus);

// True when (date, id) of a is before that of b.
bool earlier(const Document& a, const Document& b);

}  // namespace simvec
