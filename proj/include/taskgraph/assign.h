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

// Alignment between predicted steps (rows) and gold steps (columns).
//
// Three solvers are provided: the max-similarity mapping used by earlier
// work (gameable by repeating a good step), one-to-one maximum-weight
// assignment, and a relaxed assignment in which one side may be covered
// twice.

#ifndef TASKGRAPH_ASSIGN_H_
#define TASKGRAPH_ASSIGN_H_

#include <cstddef>
#include <optional>
#include <vector>

namespace taskgraph {

// Dense row-major matrix of similarities in [0, 1].
class SimMatrix {
 public:
  SimMatrix() = default;
  SimMatrix(size_t rows, size_t cols, double fill = 0.0);
  // Throws std::invalid_argument on ragged input or entries outside [0, 1].
  static SimMatrix FromRows(const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  // Throws std::invalid_argument when value is outside [0, 1].
  void Set(size_t r, size_t c, double value);

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// precision = mean over rows of the row max, recall = mean over columns of
// the column max. Both 0 for an empty matrix.
PrecisionRecall LegacyScores(const SimMatrix& m);

enum class MatchKind {
  kOneToOne,
  kGoldDuplicated,  // each gold column may take two rows; scores precision
  kPredDuplicated   // each predicted row may take two columns; scores recall
};

struct MatchedPair {
  size_t row = 0;
  size_t col = 0;
  double similarity = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

struct Matching {
  MatchKind kind = MatchKind::kOneToOne;
  // Sorted by (row, col).
  std::vector<MatchedPair> pairs;
  std::vector<size_t> unmatched_rows;
  std::vector<size_t> unmatched_cols;

  // Sum of pair similarities in pair order.
  double Total() const;
};

// Maximum-weight one-to-one matching of cardinality min(rows, cols). Among
// optimal matchings the one whose column sequence, read in row order, is
// lexicographically smallest is returned.
Matching Hungarian(const SimMatrix& m);

// Assignment over the matrix with one side's copies doubled. The copies
// carry the original similarities and map back to the original index.
Matching RelaxedMatch(const SimMatrix& m, MatchKind side);

// Scores defined by the matching kind: precision for kOneToOne and
// kGoldDuplicated, recall for kOneToOne and kPredDuplicated. Undefined sides
// are nullopt. Zero counts score 0.
struct MatchScores {
  std::optional<double> precision;
  std::optional<double> recall;
};

MatchScores ScoreMatching(const Matching& matching, size_t n_pred, size_t n_gold);

// Precision from the gold-duplicated match and recall from the
// pred-duplicated match.
PrecisionRecall RelaxedScores(const SimMatrix& m);
PrecisionRecall HungarianScores(const SimMatrix& m);

}  // namespace taskgraph

#endif  // TASKGRAPH_ASSIGN_H_
