// SPDX-License-Identifier: Apache-2.0
#pragma once

// Tokenization and the three feature encodings: binary bag-of-words over a
// frequency-pruned vocabulary, one-of-K class encoding, and dense vectors
// supplied by an external embedding export.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace ortho {

enum class TokenizerScheme {
  whitespace,     // lowercase, split on Unicode whitespace
  unicode_words,  // whitespace plus stripping of edge punctuation
};

TokenizerScheme parse_tokenizer_scheme(const std::string& name);
std::string tokenizer_scheme_name(TokenizerScheme scheme);

std::vector<std::string> tokenize(const std::string& text,
                                  TokenizerScheme scheme);

// Binary sparse or dense real vector. Sparse indices are strictly
// increasing and below dim; a sparse vector is implicitly one at its
// indices and zero elsewhere.
class FeatureVector {
 public:
  static FeatureVector sparse(std::uint32_t dim,
                              std::vector<std::uint32_t> indices);
  static FeatureVector dense(std::vector<double> values);

  bool is_sparse() const { return sparse_; }
  std::uint32_t dim() const { return dim_; }
  const std::vector<std::uint32_t>& indices() const;
  const std::vector<double>& values() const;

 private:
  FeatureVector() = default;
  bool sparse_ = true;
  std::uint32_t dim_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

struct Vocabulary {
  std::unordered_map<std::string, std::uint32_t> token_to_index;
  std::uint32_t min_count = 1;

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(token_to_index.size());
  }
  // Tokens ordered by their index.
  std::vector<std::string> tokens_by_index() const;
};

// Keeps exactly the tokens occurring >= min_count times across docs.
// Indices run by descending frequency, ties by lexicographic order.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::uint32_t min_count);

void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// Binary presence vector; out-of-vocabulary tokens are ignored.
FeatureVector bow_vectorize(const std::vector<std::string>& tokens,
                            const Vocabulary& vocab);

struct ClassIndex {
  std::unordered_map<std::string, std::uint32_t> class_to_index;

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(class_to_index.size());
  }
  std::vector<std::string> classes_by_index() const;
};

// Indexes the distinct class ids in lexicographic order.
ClassIndex build_class_index(const std::vector<std::string>& class_ids);

void save_class_index(const ClassIndex& index, const std::string& path);
ClassIndex load_class_index(const std::string& path);

// One-hot vector of dim K; a class id absent from the index yields the
// all-zero vector (unseen classes are expected at ranking time).
FeatureVector ook_vectorize(const std::string& class_id,
                            const ClassIndex& index);

struct EmbeddingTable {
  std::uint32_t dim = 0;
  std::map<std::string, std::vector<double>> entries;
};

// File format: first line is the dimension, then one record per line as
// "key<TAB>v0 v1 ... v_{dim-1}".
EmbeddingTable load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingTable& table, const std::string& path);

// Exact-match lookup; a missing key is an error, never a silent zero.
FeatureVector lookup_embedding(const std::string& key,
                               const EmbeddingTable& table);

}  // namespace ortho
