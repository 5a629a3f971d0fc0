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

#include "taskgraph/sim.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "taskgraph/core.h"
#include "taskgraph/textnorm.h"

namespace taskgraph {
namespace {

double ParseDouble(std::string_view field) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("unparsable number '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    const size_t start = line.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    size_t stop = line.find_first_of(" \t\r", start);
    if (stop == std::string_view::npos) stop = line.size();
    fields.push_back(line.substr(start, stop - start));
    pos = stop;
  }
  return fields;
}

std::map<std::string, int> TermFrequencies(const TokenStream& tokens) {
  std::map<std::string, int> tf;
  for (const std::string& token : tokens) ++tf[token];
  return tf;
}

double Norm(const std::map<std::string, int>& tf) {
  double sum = 0.0;
  for (const auto& [term, count] : tf) sum += static_cast<double>(count) * count;
  return std::sqrt(sum);
}

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

EmbeddingFormat ParseEmbeddingFormat(std::string_view name) {
  if (name == "word_text") return EmbeddingFormat::kWordText;
  if (name == "step_jsonl") return EmbeddingFormat::kStepJsonl;
  throw ValidationError("unknown embedding format '" + std::string(name) +
                        "' (expected word_text or step_jsonl)");
}

bool EmbeddingStore::Contains(std::string_view key) const {
  return Find(key) != nullptr;
}

const std::vector<double>* EmbeddingStore::Find(std::string_view key) const {
  auto it = vectors_.find(std::string(key));
  return it == vectors_.end() ? nullptr : &it->second;
}

bool EmbeddingStore::Insert(std::string key, std::vector<double> vector) {
  if (vector.empty()) throw ValidationError("empty vector for '" + key + "'");
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw ValidationError("dimension mismatch for '" + key + "': expected " +
                          std::to_string(dimension_) + ", got " +
                          std::to_string(vector.size()));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) {
      throw ValidationError("non-finite component in vector for '" + key + "'");
    }
  }
  auto [it, inserted] = vectors_.insert_or_assign(key, std::move(vector));
  if (inserted) keys_.push_back(std::move(key));
  return inserted;
}

EmbeddingStore ReadEmbeddings(std::istream& in, const std::string& source,
                              EmbeddingFormat format,
                              std::vector<std::string>* warnings) {
  EmbeddingStore store;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string where = source + ":" + std::to_string(line_number) + ": ";
    std::string key;
    std::vector<double> vector;
    try {
      if (format == EmbeddingFormat::kWordText) {
        const auto fields = SplitFields(line);
        if (fields.empty()) continue;
        if (fields.size() < 2) throw ValidationError("token without vector");
        key = std::string(fields[0]);
        for (size_t i = 1; i < fields.size(); ++i) {
          vector.push_back(ParseDouble(fields[i]));
        }
      } else {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json record;
        try {
          record = Json::parse(line);
        } catch (const Json::parse_error& e) {
          throw ValidationError(std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object() || !record.contains("text") ||
            !record["text"].is_string() || !record.contains("vector") ||
            !record["vector"].is_array()) {
          throw ValidationError("expected {\"text\": string, \"vector\": [numbers]}");
        }
        key = record["text"].get<std::string>();
        for (const Json& x : record["vector"]) {
          if (!x.is_number()) throw ValidationError("vector component is not a number");
          vector.push_back(x.get<double>());
        }
      }
      if (!store.Insert(key, std::move(vector)) && warnings != nullptr) {
        warnings->push_back(where + "duplicate key '" + key + "', keeping the last vector");
      }
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return store;
}

EmbeddingStore LoadEmbeddings(const std::string& path, EmbeddingFormat format,
                              std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return ReadEmbeddings(in, path, format, warnings);
}

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double TokenCosine(std::string_view a, std::string_view b) {
  const TokenStream ta = Tokenize(a);
  const TokenStream tb = Tokenize(b);
  if (ta == tb) return ta.empty() ? 0.0 : 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  const auto fa = TermFrequencies(ta);
  const auto fb = TermFrequencies(tb);
  // Both iterations visit the shared terms in sorted order, so the sum is
  // bitwise symmetric in (a, b).
  const auto& small = fa.size() <= fb.size() ? fa : fb;
  const auto& large = fa.size() <= fb.size() ? fb : fa;
  double dot = 0.0;
  for (const auto& [term, count] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += static_cast<double>(count) * it->second;
  }
  return Clamp01(dot / (Norm(fa) * Norm(fb)));
}

SimilarityKind ParseSimilarityKind(std::string_view name) {
  if (name == "token") return SimilarityKind::kToken;
  if (name == "embedding") return SimilarityKind::kEmbedding;
  if (name == "exact") return SimilarityKind::kExact;
  throw ValidationError("unknown similarity provider '" + std::string(name) +
                        "' (expected token, embedding or exact)");
}

SimilarityProvider SimilarityProvider::Token() {
  return SimilarityProvider(SimilarityKind::kToken, nullptr);
}

SimilarityProvider SimilarityProvider::Exact() {
  return SimilarityProvider(SimilarityKind::kExact, nullptr);
}

SimilarityProvider SimilarityProvider::Embedding(
    std::shared_ptr<const EmbeddingStore> store) {
  if (store == nullptr) throw ValidationError("embedding provider needs a store");
  return SimilarityProvider(SimilarityKind::kEmbedding, std::move(store));
}

double SimilarityProvider::operator()(std::string_view a, std::string_view b) const {
  if (a == b && !a.empty()) return 1.0;
  switch (kind_) {
    case SimilarityKind::kExact: {
      const std::string na = NormalizeText(a);
      return !na.empty() && na == NormalizeText(b) ? 1.0 : 0.0;
    }
    case SimilarityKind::kEmbedding: {
      const std::vector<double>* va = store_->Find(a);
      const std::vector<double>* vb = store_->Find(b);
      if (va != nullptr && vb != nullptr) return Clamp01(Cosine(*va, *vb));
      return TokenCosine(a, b);
    }
    case SimilarityKind::kToken:
      break;
  }
  return TokenCosine(a, b);
}

std::vector<std::string> TopKSimilarTokens(const EmbeddingStore& store,
                                           std::string_view token, size_t k) {
  const std::vector<double>* query = store.Find(token);
  if (query == nullptr) {
    throw ValidationError("token '" + std::string(token) + "' is not in the embedding store");
  }
  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(store.size());
  for (const std::string& key : store.keys()) {
    if (key == token) continue;
    scored.emplace_back(Cosine(*query, *store.Find(key)), &key);
  }
  const size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                    [](const auto& x, const auto& y) {
                      if (x.first != y.first) return x.first > y.first;
                      return *x.second < *y.second;
                    });
  std::vector<std::string> out;
  out.reserve(keep);
  for (size_t i = 0; i < keep; ++i) out.push_back(*scored[i].second);
  return out;
}

}  // namespace taskgraph
