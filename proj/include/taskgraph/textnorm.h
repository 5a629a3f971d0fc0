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

// Tokenization and Rouge scoring over step texts.
//
// The tokenizer lowercases, deletes punctuation and symbol characters and
// splits on whitespace. There is no stemming and no stopword removal, so the
// scores are reproducible by any implementation following the same rule.

#ifndef TASKGRAPH_TEXTNORM_H_
#define TASKGRAPH_TEXTNORM_H_

#include <string>
#include <string_view>
#include <vector>

namespace taskgraph {

using TokenStream = std::vector<std::string>;

TokenStream Tokenize(std::string_view text);

// Tokens re-joined with single spaces. Two step texts are considered the
// same step when their normalized forms are equal.
std::string NormalizeText(std::string_view text);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

// (1 + beta^2) p r / (beta^2 p + r), or 0 when the denominator is 0.
// Throws std::invalid_argument when beta <= 0.
double FBeta(double precision, double recall, double beta);

// Fills f1 and f2 from precision and recall.
RougeScore MakeRougeScore(double precision, double recall);

// Clipped n-gram overlap, n in {1, 2}. Identical streams score 1 (including
// two empty streams); otherwise a side without n-grams scores 0.
RougeScore RougeN(const TokenStream& reference, const TokenStream& candidate,
                  int n);

// Longest-common-subsequence Rouge with the same zero conventions as RougeN.
RougeScore RougeL(const TokenStream& reference, const TokenStream& candidate);

size_t LcsLength(const TokenStream& a, const TokenStream& b);

}  // namespace taskgraph

#endif  // TASKGRAPH_TEXTNORM_H_
