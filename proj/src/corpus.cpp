#include "simvec/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include "json.hpp"

#include "simvec/error.hpp"

namespace simvec {

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4);
  auto m = digits(5, 2);
  auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{*y},
                                  std::chrono::month{static_cast<unsigned>(*m)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{*y, *m, *d};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Field parse_field(std::string_view name) {
  if (name == "title") return Field::kTitle;
  if (name == "abstract") return Field::kAbstract;
  if (name == "description") return Field::kDescription;
  if (name == "all") return Field::kAll;
  throw Error("unknown field '" + std::string(name) + "'");
}

std::string_view field_name(Field f) {
  switch (f) {
    case Field::kTitle:
      return "title";
    case Field::kAbstract:
      return "abstract";
    case Field::kDescription:
      return "description";
    case Field::kAll:
      return "all";
  }
  return "?";
}

std::string Document::text(Field f) const {
  switch (f) {
    case Field::kTitle:
      return title;
    case Field::kAbstract:
      return abstract;
    case Field::kDescription:
      return description;
    case Field::kAll:
      return title + " " + abstract + " " + description;
  }
  return {};
}

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  index_.reserve(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    auto [it, inserted] = index_.emplace(docs_[i].id, i);
    if (!inserted)
      throw Error("duplicate document id '" + docs_[i].id + "' at positions " +
                  std::to_string(it->second) + " and " + std::to_string(i));
  }
}

const Document* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &docs_[it->second];
}

std::optional<std::size_t> Corpus::position(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Document& Corpus::at(std::string_view id) const {
  const Document* d = find(id);
  if (d == nullptr) throw Error("unknown document id '" + std::string(id) + "'");
  return *d;
}

namespace {

// Reason the line is malformed, or empty on success.
std::string parse_record(const std::string& line, Field selector, Document& doc) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    return std::string("invalid JSON: ") + e.what();
  }
  if (!j.is_object()) return "record is not a JSON object";

  auto get = [&](const char* key, std::string& dst, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) return std::string("missing '") + key + "'";
      dst.clear();
      return {};
    }
    if (!it->is_string()) return std::string("'") + key + "' is not a string";
    dst = it->get<std::string>();
    return {};
  };

  std::string date_text;
  for (auto [key, dst, required] :
       {std::tuple<const char*, std::string*, bool>{"id", &doc.id, true},
        {"date", &date_text, true},
        {"main_class", &doc.main_class, false},
        {"subclass", &doc.subclass, false},
        {"title", &doc.title, false},
        {"abstract", &doc.abstract, false},
        {"description", &doc.description, false}}) {
    if (auto err = get(key, *dst, required); !err.empty()) return err;
  }
  if (doc.id.empty()) return "empty id";
  auto date = Date::parse(date_text);
  if (!date) return "invalid date '" + date_text + "'";
  doc.date = *date;
  if (!doc.subclass.empty() && doc.main_class.empty())
    return "subclass without main_class";

  if (selector != Field::kAll) {
    if (selector != Field::kTitle) doc.title.clear();
    if (selector != Field::kAbstract) doc.abstract.clear();
    if (selector != Field::kDescription) doc.description.clear();
  }
  return {};
}

}  // namespace

IngestResult ingest(std::istream& in, Field selector) {
  IngestResult result;
  std::vector<Document> docs;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Document doc;
    if (auto err = parse_record(line, selector, doc); !err.empty()) {
      ++result.skipped;
      result.diagnostics.push_back("line " + std::to_string(line_no) + ": " + err);
      continue;
    }
    auto [it, inserted] = first_line.emplace(doc.id, line_no);
    if (!inserted)
      throw Error("duplicate document id '" + doc.id + "' on lines " +
                  std::to_string(it->second) + " and " + std::to_string(line_no));
    docs.push_back(std::move(doc));
  }
  result.corpus = Corpus(std::move(docs));
  return result;
}

IngestResult ingest(const std::string& path, Field selector) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read corpus file '" + path + "'");
  return ingest(in, selector);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& d : corpus.documents()) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["date"] = d.date.to_string();
    j["main_class"] = d.main_class;
    j["subclass"] = d.subclass;
    j["title"] = d.title;
    j["abstract"] = d.abstract;
    j["description"] = d.description;
    // Replace invalid UTF-8 rather than failing on ragged input.
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus store '" + path + "'");
  write_corpus(corpus, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

bool earlier(const Document& a, const Document& b) {
  if (a.date != b.date) return a.date < b.date;
  return a.id < b.id;
}

std::vector<const Document*> by_date(const Corpus& corpus) {
  std::vector<const Document*> order;
  order.reserve(corpus.size());
  for (const auto& d : corpus.documents()) order.push_back(&d);
  std::stable_sort(order.begin(), order.end(),
                   [](const Document* a, const Document* b) { return earlier(*a, *b); });
  return order;
}

}  // namespace simvec
