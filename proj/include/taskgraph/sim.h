// Copyright 2026 The TaskGraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Pairwise step similarity in [0, 1].
//
// A provider is either token-based (cosine of term-frequency vectors over
// Tokenize), embedding-based (cosine of precomputed vectors, negative values
// clamped to 0, falling back to the token cosine for texts without a
// vector) or exact (1 iff normalized texts are equal).

#ifndef TASKGRAPH_SIM_H_
#define TASKGRAPH_SIM_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taskgraph {

enum class EmbeddingFormat {
  kWordText,  // "token v1 ... vd" per line, GloVe style
  kStepJsonl  // {"text": ..., "vector": [...]} per line
};

EmbeddingFormat ParseEmbeddingFormat(std::string_view name);

class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  size_t dimension() const { return dimension_; }
  size_t size() const { return keys_.size(); }
  bool Contains(std::string_view key) const;
  // nullptr when absent.
  const std::vector<double>* Find(std::string_view key) const;
  // Keys in insertion order (first occurrence).
  const std::vector<std::string>& keys() const { return keys_; }

  // Replaces an existing vector (last wins) and returns false in that case.
  // Throws ValidationError on a dimension mismatch or non-finite component.
  bool Insert(std::string key, std::vector<double> vector);

 private:
  size_t dimension_ = 0;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Throws IoError when unreadable and ValidationError on malformed content.
// Duplicate keys keep the last vector and append a message to *warnings.
EmbeddingStore LoadEmbeddings(const std::string& path, EmbeddingFormat format,
                              std::vector<std::string>* warnings = nullptr);
EmbeddingStore ReadEmbeddings(std::istream& in, const std::string& source,
                              EmbeddingFormat format,
                              std::vector<std::string>* warnings = nullptr);

// Raw cosine in [-1, 1]; 0 when either vector is all zeros.
double Cosine(const std::vector<double>& a, const std::vector<double>& b);

// Cosine of term-frequency vectors over Tokenize(). Texts with identical
// token streams score 1; otherwise an empty stream scores 0.
double TokenCosine(std::string_view a, std::string_view b);

enum class SimilarityKind { kToken, kEmbedding, kExact };

SimilarityKind ParseSimilarityKind(std::string_view name);

class SimilarityProvider {
 public:
  static SimilarityProvider Token();
  static SimilarityProvider Exact();
  static SimilarityProvider Embedding(std::shared_ptr<const EmbeddingStore> store);

  SimilarityKind kind() const { return kind_; }
  const EmbeddingStore* store() const { return store_.get(); }

  // Symmetric, in [0, 1], and 1 for equal nonempty texts.
  double operator()(std::string_view a, std::string_view b) const;

 private:
  SimilarityProvider(SimilarityKind kind, std::shared_ptr<const EmbeddingStore> store)
      : kind_(kind), store_(std::move(store)) {}

  SimilarityKind kind_;
  std::shared_ptr<const EmbeddingStore> store_;
};

// The k stored tokens with highest cosine to `token`, excluding itself.
// Ties are broken by lexicographic token order. Throws ValidationError when
// `token` is not in the store.
std::vector<std::string> TopKSimilarTokens(const EmbeddingStore& store,
                                           std::string_view token, size_t k);

}  // namespace taskgraph

#endif  // TASKGRAPH_SIM_H_
