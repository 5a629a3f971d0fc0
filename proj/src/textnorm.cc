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

#include "taskgraph/textnorm.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace taskgraph {
namespace {

// Decodes one code point starting at text[*pos] and advances *pos. Malformed
// sequences yield the raw byte so that no input is silently dropped.
char32_t DecodeUtf8(std::string_view text, size_t* pos) {
  const auto lead = static_cast<unsigned char>(text[*pos]);
  int length = 1;
  char32_t cp = lead;
  if (lead >= 0xF0 && lead < 0xF8) {
    length = 4;
    cp = lead & 0x07;
  } else if (lead >= 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if (lead >= 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  }
  if (length == 1 || lead >= 0xF8 || *pos + length > text.size()) {
    ++*pos;
    return lead;
  }
  for (int k = 1; k < length; ++k) {
    const auto cont = static_cast<unsigned char>(text[*pos + k]);
    if ((cont & 0xC0) != 0x80) {
      ++*pos;
      return lead;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  *pos += length;
  return cp;
}

void AppendUtf8(char32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSpace(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200B) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 ||
         c == 0xFEFF;
}

// ASCII punctuation and symbols plus the common Unicode punctuation blocks.
bool IsPunctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  if (c >= 0xA1 && c <= 0xBF) {
    // Keep the Latin-1 letters and digits in this block.
    return c != 0xAA && c != 0xB2 && c != 0xB3 && c != 0xB5 && c != 0xB9 &&
           c != 0xBA && c != 0xBC && c != 0xBD && c != 0xBE;
  }
  if (c == 0xD7 || c == 0xF7) return true;
  if (c >= 0x2010 && c <= 0x2027) return true;
  if (c >= 0x2030 && c <= 0x205E) return true;
  if (c >= 0x20A0 && c <= 0x20CF) return true;
  if (c >= 0x2E00 && c <= 0x2E7F) return true;
  if ((c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
      (c >= 0x3014 && c <= 0x301F)) {
    return true;
  }
  if ((c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
      (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65)) {
    return true;
  }
  return false;
}

char32_t ToLower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x137 && c % 2 == 0) return c + 1;
  if (c >= 0x139 && c <= 0x148 && c % 2 == 1) return c + 1;
  if (c >= 0x14A && c <= 0x177 && c % 2 == 0) return c + 1;
  if (c >= 0x179 && c <= 0x17E && c % 2 == 1) return c + 1;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

using NGramCounts = std::map<std::string, int>;

NGramCounts CountNGrams(const TokenStream& tokens, int n) {
  NGramCounts counts;
  if (tokens.size() < static_cast<size_t>(n)) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

int Total(const NGramCounts& counts) {
  int total = 0;
  for (const auto& [gram, count] : counts) total += count;
  return total;
}

}  // namespace

TokenStream Tokenize(std::string_view text) {
  TokenStream tokens;
  std::string current;
  size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = DecodeUtf8(text, &pos);
    if (IsSpace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!IsPunctuation(c)) {
      AppendUtf8(ToLower(c), &current);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string NormalizeText(std::string_view text) {
  std::string out;
  for (const std::string& token : Tokenize(text)) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

double FBeta(double precision, double recall, double beta) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("fbeta: beta must be positive");
  }
  const double b2 = beta * beta;
  const double denominator = b2 * precision + recall;
  if (denominator == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denominator;
}

RougeScore MakeRougeScore(double precision, double recall) {
  RougeScore score;
  score.precision = precision;
  score.recall = recall;
  score.f1 = FBeta(precision, recall, 1.0);
  score.f2 = FBeta(precision, recall, 2.0);
  return score;
}

RougeScore RougeN(const TokenStream& reference, const TokenStream& candidate,
                  int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n: n must be 1 or 2");
  if (reference == candidate) return MakeRougeScore(1.0, 1.0);
  const NGramCounts ref = CountNGrams(reference, n);
  const NGramCounts cand = CountNGrams(candidate, n);
  const int ref_total = Total(ref);
  const int cand_total = Total(cand);
  if (ref_total == 0 || cand_total == 0) return RougeScore{};
  int overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return MakeRougeScore(static_cast<double>(overlap) / cand_total,
                        static_cast<double>(overlap) / ref_total);
}

size_t LcsLength(const TokenStream& a, const TokenStream& b) {
  std::vector<size_t> prev(b.size() + 1, 0), row(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      row[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], row[j - 1]);
    }
    std::swap(prev, row);
  }
  return prev[b.size()];
}

RougeScore RougeL(const TokenStream& reference, const TokenStream& candidate) {
  if (reference == candidate) return MakeRougeScore(1.0, 1.0);
  if (reference.empty() || candidate.empty()) return RougeScore{};
  const double lcs = static_cast<double>(LcsLength(reference, candidate));
  return MakeRougeScore(lcs / candidate.size(), lcs / reference.size());
}

}  // namespace taskgraph
