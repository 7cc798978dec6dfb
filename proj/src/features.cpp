// SPDX-License-Identifier: Apache-2.0
#include "ortho/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ortho/errors.hpp"
#include "serialize.hpp"

namespace ortho {
namespace {

constexpr const char* kVocabMagic = "ORTHO-VOCAB";
constexpr const char* kClassMagic = "ORTHO-CLASSES";

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x0085:  // next line
    case 0x00A0:  // no-break space
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one UTF-8 codepoint starting at i and advances i past it. An
// invalid byte is passed through as its own codepoint so malformed input
// still tokenizes instead of throwing.
char32_t next_codepoint(const std::string& s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0) {
    len = 4;
    cp = b0 & 0x07u;
  } else if (b0 >= 0xE0) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if (b0 >= 0xC0) {
    len = 2;
    cp = b0 & 0x1Fu;
  }
  if (len == 1 || i + len > s.size()) {
    ++i;
    return b0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0u) != 0x80u) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (bk & 0x3Fu);
  }
  i += len;
  return cp;
}

void strip_edge_punctuation(std::string& token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end &&
         std::ispunct(static_cast<unsigned char>(token[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::ispunct(static_cast<unsigned char>(token[end - 1]))) {
    --end;
  }
  token = token.substr(begin, end - begin);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot read " + path);
  return is;
}

// Shared layout of the vocabulary and class-index files: a magic line,
// key/value header lines, then "entry<TAB>index" lines.
void save_indexed_entries(std::ostream& os,
                          const std::vector<std::string>& by_index,
                          const std::string& path) {
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    const std::string& entry = by_index[i];
    if (entry.find('\t') != std::string::npos ||
        entry.find('\n') != std::string::npos) {
      throw DataError(path + ": entry contains tab or newline: \"" + entry +
                      "\"");
    }
    os << entry << '\t' << i << '\n';
  }
}

std::unordered_map<std::string, std::uint32_t> load_indexed_entries(
    std::istream& is, std::uint64_t size, const std::string& path) {
  std::unordered_map<std::string, std::uint32_t> out;
  std::vector<bool> seen(size, false);
  std::string line;
  for (std::uint64_t i = 0; i < size; ++i) {
    if (!std::getline(is, line)) {
      throw DataError(path + ": expected " + std::to_string(size) +
                      " entries, got " + std::to_string(i));
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ": malformed entry line \"" + line + "\"");
    }
    std::string entry = line.substr(0, tab);
    char* end = nullptr;
    unsigned long idx = std::strtoul(line.c_str() + tab + 1, &end, 10);
    if (end == line.c_str() + tab + 1 || *end != '\0' || idx >= size) {
      throw DataError(path + ": bad index in line \"" + line + "\"");
    }
    if (seen[idx]) {
      throw DataError(path + ": duplicate index " + std::to_string(idx));
    }
    seen[idx] = true;
    if (!out.emplace(std::move(entry), static_cast<std::uint32_t>(idx))
             .second) {
      throw DataError(path + ": duplicate entry in line \"" + line + "\"");
    }
  }
  return out;
}

std::vector<std::string> invert_index(
    const std::unordered_map<std::string, std::uint32_t>& map) {
  std::vector<std::string> out(map.size());
  for (const auto& [entry, idx] : map) out[idx] = entry;
  return out;
}

}  // namespace

TokenizerScheme parse_tokenizer_scheme(const std::string& name) {
  if (name == "whitespace") return TokenizerScheme::whitespace;
  if (name == "unicode-words") return TokenizerScheme::unicode_words;
  throw std::invalid_argument("unknown tokenizer scheme \"" + name + "\"");
}

std::string tokenizer_scheme_name(TokenizerScheme scheme) {
  switch (scheme) {
    case TokenizerScheme::whitespace:
      return "whitespace";
    case TokenizerScheme::unicode_words:
      return "unicode-words";
  }
  throw std::invalid_argument("bad tokenizer scheme");
}

std::vector<std::string> tokenize(const std::string& text,
                                  TokenizerScheme scheme) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (scheme == TokenizerScheme::unicode_words) {
      strip_edge_punctuation(current);
    }
    if (!current.empty()) tokens.push_back(current);
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = next_codepoint(text, i);
    if (is_unicode_space(cp)) {
      flush();
      continue;
    }
    for (std::size_t k = start; k < i; ++k) {
      char c = text[k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

FeatureVector FeatureVector::sparse(std::uint32_t dim,
                                    std::vector<std::uint32_t> indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dim) {
      throw std::invalid_argument("sparse index out of range");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw std::invalid_argument("sparse indices must be strictly increasing");
    }
  }
  FeatureVector v;
  v.sparse_ = true;
  v.dim_ = dim;
  v.indices_ = std::move(indices);
  return v;
}

FeatureVector FeatureVector::dense(std::vector<double> values) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("dense feature values must be finite");
    }
  }
  FeatureVector v;
  v.sparse_ = false;
  v.dim_ = static_cast<std::uint32_t>(values.size());
  v.values_ = std::move(values);
  return v;
}

const std::vector<std::uint32_t>& FeatureVector::indices() const {
  if (!sparse_) throw std::logic_error("indices() on a dense vector");
  return indices_;
}

const std::vector<double>& FeatureVector::values() const {
  if (sparse_) throw std::logic_error("values() on a sparse vector");
  return values_;
}

std::vector<std::string> Vocabulary::tokens_by_index() const {
  return invert_index(token_to_index);
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::uint32_t min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs) {
    for (const auto& token : doc) counts[token] += 1;
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  vocab.min_count = min_count;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    vocab.token_to_index.emplace(std::move(kept[i].first),
                                 static_cast<std::uint32_t>(i));
  }
  return vocab;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream os = open_out(path);
  detail::write_magic(os, kVocabMagic, 1);
  detail::write_kv(os, "min_count", std::to_string(vocab.min_count));
  detail::write_kv(os, "size", std::to_string(vocab.size()));
  save_indexed_entries(os, vocab.tokens_by_index(), path);
  if (!os) throw DataError("write failed: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream is = open_in(path);
  int version = detail::read_magic(is, kVocabMagic, path);
  if (version != 1) {
    throw DataError(path + ": unsupported vocabulary version " +
                    std::to_string(version));
  }
  Vocabulary vocab;
  vocab.min_count = static_cast<std::uint32_t>(
      detail::expect_kv_u64(is, "min_count", path));
  std::uint64_t size = detail::expect_kv_u64(is, "size", path);
  vocab.token_to_index = load_indexed_entries(is, size, path);
  return vocab;
}

FeatureVector bow_vectorize(const std::vector<std::string>& tokens,
                            const Vocabulary& vocab) {
  if (vocab.size() == 0) {
    throw DataError("cannot vectorize with an empty vocabulary");
  }
  std::vector<std::uint32_t> indices;
  for (const auto& token : tokens) {
    auto it = vocab.token_to_index.find(token);
    if (it != vocab.token_to_index.end()) indices.push_back(it->second);
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return FeatureVector::sparse(vocab.size(), std::move(indices));
}

std::vector<std::string> ClassIndex::classes_by_index() const {
  return invert_index(class_to_index);
}

ClassIndex build_class_index(const std::vector<std::string>& class_ids) {
  std::vector<std::string> sorted = class_ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  ClassIndex index;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    index.class_to_index.emplace(std::move(sorted[i]),
                                 static_cast<std::uint32_t>(i));
  }
  return index;
}

void save_class_index(const ClassIndex& index, const std::string& path) {
  std::ofstream os = open_out(path);
  detail::write_magic(os, kClassMagic, 1);
  detail::write_kv(os, "size", std::to_string(index.size()));
  save_indexed_entries(os, index.classes_by_index(), path);
  if (!os) throw DataError("write failed: " + path);
}

ClassIndex load_class_index(const std::string& path) {
  std::ifstream is = open_in(path);
  int version = detail::read_magic(is, kClassMagic, path);
  if (version != 1) {
    throw DataError(path + ": unsupported class-index version " +
                    std::to_string(version));
  }
  std::uint64_t size = detail::expect_kv_u64(is, "size", path);
  ClassIndex index;
  index.class_to_index = load_indexed_entries(is, size, path);
  return index;
}

FeatureVector ook_vectorize(const std::string& class_id,
                            const ClassIndex& index) {
  auto it = index.class_to_index.find(class_id);
  if (it == index.class_to_index.end()) {
    return FeatureVector::sparse(index.size(), {});
  }
  return FeatureVector::sparse(index.size(), {it->second});
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw DataError(path + ": empty file");
  char* end = nullptr;
  unsigned long dim = std::strtoul(line.c_str(), &end, 10);
  if (end == line.c_str() || *end != '\0' || dim == 0) {
    throw DataError(path + ":1: header must be the positive dimension");
  }
  EmbeddingTable table;
  table.dim = static_cast<std::uint32_t>(dim);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    auto where = path + ":" + std::to_string(lineno);
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(where + ": expected \"key<TAB>values\"");
    }
    std::string key = line.substr(0, tab);
    if (key.empty()) throw DataError(where + ": empty key");
    std::istringstream vs(line.substr(tab + 1));
    std::vector<double> values;
    values.reserve(table.dim);
    double x = 0.0;
    while (vs >> x) {
      if (!std::isfinite(x)) throw DataError(where + ": non-finite value");
      values.push_back(x);
    }
    if (!vs.eof()) throw DataError(where + ": malformed number");
    if (values.size() != table.dim) {
      throw DataError(where + ": expected " + std::to_string(table.dim) +
                      " values, got " + std::to_string(values.size()));
    }
    if (!table.entries.emplace(std::move(key), std::move(values)).second) {
      throw DataError(where + ": duplicate key");
    }
  }
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::ofstream os = open_out(path);
  os << table.dim << '\n';
  for (const auto& [key, values] : table.entries) {
    if (values.size() != table.dim) {
      throw DataError(path + ": entry \"" + key + "\" has wrong dimension");
    }
    os << key << '\t';
    detail::write_double_row(os, values.data(), values.size());
  }
  if (!os) throw DataError("write failed: " + path);
}

FeatureVector lookup_embedding(const std::string& key,
                               const EmbeddingTable& table) {
  auto it = table.entries.find(key);
  if (it == table.entries.end()) {
    throw DataError("embedding not found for key \"" + key + "\"");
  }
  return FeatureVector::dense(it->second);
}

}  // namespace ortho
