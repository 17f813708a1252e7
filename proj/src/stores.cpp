#include "simvec/stores.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "simvec/error.hpp"

namespace simvec {

namespace {

std::ifstream open_in(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(std::string("cannot read ") + what + " '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path, const char* what) {
  std::ofstream out(path);
  if (!out) throw Error(std::string("cannot write ") + what + " '" + path + "'");
  return out;
}

std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view s, std::size_t line) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return x;
}

template <typename T>
T parse_uint(std::string_view s, std::size_t line) {
  T x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Splits "id<TAB>rest"; throws when the tab is missing.
std::pair<std::string, std::string_view> split_record(std::string_view line, std::size_t n) {
  auto tab = line.find('\t');
  if (tab == std::string_view::npos || tab == 0)
    throw Error("line " + std::to_string(n) + ": expected 'id<TAB>...'");
  return {std::string(line.substr(0, tab)), line.substr(tab + 1)};
}

}  // namespace

// ---------------------------------------------------------------------------

void write_token_store(std::span<const TokenStream> streams, std::ostream& out) {
  Field field = streams.empty() ? Field::kAll : streams.front().field;
  out << "# field " << field_name(field) << '\n';
  for (const auto& s : streams) {
    out << s.doc_id << '\t';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) out << (i ? " " : "") << s.tokens[i];
    out << '\n';
  }
}

void write_token_store(std::span<const TokenStream> streams, const std::string& path) {
  auto out = open_out(path, "token store");
  write_token_store(streams, out);
}

std::vector<TokenStream> read_token_store(std::istream& in) {
  std::vector<TokenStream> out;
  Field field = Field::kAll;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    if (line.rfind("# field ", 0) == 0) {
      field = parse_field(std::string_view(line).substr(8));
      continue;
    }
    auto [id, rest] = split_record(line, n);
    TokenStream s{id, field, {}};
    for (auto tok : split_spaces(rest)) s.tokens.emplace_back(tok);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TokenStream> read_token_store(const std::string& path) {
  auto in = open_in(path, "token store");
  return read_token_store(in);
}

// ---------------------------------------------------------------------------

void write_phrase_store(std::span<const DocPhrases> docs, std::ostream& out) {
  for (const auto& d : docs) {
    out << d.doc_id << '\t';
    bool first = true;
    for (const auto& [phrase, count] : d.counts) {
      out << (first ? "" : " ") << phrase << ':' << count;
      first = false;
    }
    out << '\n';
  }
}

void write_phrase_store(std::span<const DocPhrases> docs, const std::string& path) {
  auto out = open_out(path, "phrase store");
  write_phrase_store(docs, out);
}

std::vector<DocPhrases> read_phrase_store(std::istream& in) {
  std::vector<DocPhrases> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    auto [id, rest] = split_record(line, n);
    DocPhrases d{id, {}};
    for (auto item : split_spaces(rest)) {
      auto colon = item.rfind(':');
      if (colon == std::string_view::npos || colon == 0)
        throw Error("line " + std::to_string(n) + ": expected phrase:count");
      d.counts[std::string(item.substr(0, colon))] =
          parse_uint<std::uint32_t>(item.substr(colon + 1), n);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DocPhrases> read_phrase_store(const std::string& path) {
  auto in = open_in(path, "phrase store");
  return read_phrase_store(in);
}

// ---------------------------------------------------------------------------

void VectorStore::add(const std::string& id, SparseVector v) {
  if (dense_) throw Error("vector store holds dense vectors");
  if (v.dim != dim_) throw Error("vector for '" + id + "' has the wrong dimension");
  if (!index_.emplace(id, ids_.size()).second)
    throw Error("duplicate id '" + id + "' in vector store");
  ids_.push_back(id);
  sparse_.push_back(std::move(v));
}

void VectorStore::add(const std::string& id, DenseVector v) {
  if (!dense_) throw Error("vector store holds sparse vectors");
  if (v.dim() != dim_) throw Error("vector for '" + id + "' has the wrong dimension");
  if (!index_.emplace(id, ids_.size()).second)
    throw Error("duplicate id '" + id + "' in vector store");
  ids_.push_back(id);
  dense_vecs_.push_back(std::move(v));
}

std::size_t VectorStore::position(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown document id '" + id + "'");
  return it->second;
}

CosineResult VectorStore::similarity(const std::string& a, const std::string& b) const {
  const std::size_t i = position(a), j = position(b);
  if (dense_) return cosine_checked(dense_vecs_[i], dense_vecs_[j]);
  return cosine_checked(sparse_[i], sparse_[j]);
}

void VectorStore::write(std::ostream& out) const {
  out << "# vectors " << (dense_ ? "dense" : "sparse") << ' ' << dim_ << '\n';
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    out << ids_[i] << '\t';
    if (dense_) {
      const auto& v = dense_vecs_[i].values;
      for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << format_real(v[k]);
    } else {
      const auto& e = sparse_[i].entries;
      for (std::size_t k = 0; k < e.size(); ++k)
        out << (k ? " " : "") << e[k].index << ':' << format_real(e[k].weight);
    }
    out << '\n';
  }
}

void VectorStore::write(const std::string& path) const {
  auto out = open_out(path, "vector store");
  write(out);
}

VectorStore VectorStore::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("vector store: missing header");
  std::istringstream header(line);
  std::string hash, tag, kind;
  std::size_t dim = 0;
  if (!(header >> hash >> tag >> kind >> dim) || hash != "#" || tag != "vectors" ||
      (kind != "dense" && kind != "sparse"))
    throw Error("vector store: bad header '" + line + "'");
  VectorStore store(kind == "dense", dim);
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    auto [id, rest] = split_record(line, n);
    auto items = split_spaces(rest);
    if (store.dense_) {
      DenseVector v;
      v.values.reserve(items.size());
      for (auto item : items) v.values.push_back(parse_real(item, n));
      store.add(id, std::move(v));
    } else {
      SparseVector v;
      v.dim = dim;
      for (auto item : items) {
        auto colon = item.find(':');
        if (colon == std::string_view::npos)
          throw Error("line " + std::to_string(n) + ": expected index:weight");
        v.entries.push_back({parse_uint<TermIndex>(item.substr(0, colon), n),
                             parse_real(item.substr(colon + 1), n)});
      }
      if (!v.valid()) throw Error("line " + std::to_string(n) + ": invalid sparse vector");
      store.add(id, std::move(v));
    }
  }
  return store;
}

VectorStore VectorStore::read(const std::string& path) {
  auto in = open_in(path, "vector store");
  return read(in);
}

}  // namespace simvec
