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

#include "taskgraph/assign.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace taskgraph {
namespace {

// Reduced costs below this count as tight when recovering the
// lexicographically smallest optimum.
constexpr double kTightEps = 1e-9;

void CheckEntry(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("similarity outside [0,1]: " + std::to_string(value));
  }
}

// Maximum-weight perfect matching on a square matrix. Returns the column
// assigned to each row.
class SquareAssignment {
 public:
  explicit SquareAssignment(std::vector<std::vector<double>> weight)
      : n_(weight.size()), weight_(std::move(weight)) {}

  std::vector<int> Solve() {
    SolveWithPotentials();
    MakeLexicographic();
    return match_row_;
  }

 private:
  double Reduced(int r, int c) const { return -weight_[r][c] - u_[r] - v_[c]; }
  bool Tight(int r, int c) const { return Reduced(r, c) <= kTightEps; }

  // Shortest augmenting path formulation with row/column potentials on
  // cost = -weight.
  void SolveWithPotentials() {
    const int n = static_cast<int>(n_);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
      p[0] = i;
      int j0 = 0;
      std::vector<double> minv(n + 1, inf);
      std::vector<bool> used(n + 1, false);
      do {
        used[j0] = true;
        const int i0 = p[j0];
        double delta = inf;
        int j1 = 0;
        for (int j = 1; j <= n; ++j) {
          if (used[j]) continue;
          const double cur = -weight_[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (int j = 0; j <= n; ++j) {
          if (used[j]) {
            u[p[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const int j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    u_.assign(u.begin() + 1, u.end());
    v_.assign(v.begin() + 1, v.end());
    match_row_.assign(n_, -1);
    match_col_.assign(n_, -1);
    for (int j = 1; j <= n; ++j) {
      match_row_[p[j] - 1] = j - 1;
      match_col_[j - 1] = p[j] - 1;
    }
  }

  // Every optimal matching lives on tight edges. Walk rows in order, giving
  // each the smallest tight column that still admits a perfect completion,
  // repairing the current matching along an alternating path.
  void MakeLexicographic() {
    fixed_col_.assign(n_, false);
    for (size_t i = 0; i < n_; ++i) {
      const int row = static_cast<int>(i);
      for (int c = 0; c < static_cast<int>(n_); ++c) {
        if (fixed_col_[c] || !Tight(row, c)) continue;
        if (match_row_[row] == c) break;
        // Free c by rerouting its current row to the column `row` vacates.
        const int displaced = match_col_[c];
        const int vacated = match_row_[row];
        std::vector<bool> visited(n_, false);
        visited[c] = true;
        if (Reroute(displaced, vacated, &visited)) {
          match_row_[row] = c;
          match_col_[c] = row;
          break;
        }
      }
      fixed_col_[match_row_[row]] = true;
    }
  }

  bool Reroute(int row, int target, std::vector<bool>* visited) {
    for (int c = 0; c < static_cast<int>(n_); ++c) {
      if (fixed_col_[c] || (*visited)[c] || !Tight(row, c)) continue;
      (*visited)[c] = true;
      if (c == target || Reroute(match_col_[c], target, visited)) {
        match_row_[row] = c;
        match_col_[c] = row;
        return true;
      }
    }
    return false;
  }

  size_t n_;
  std::vector<std::vector<double>> weight_;
  std::vector<double> u_, v_;
  std::vector<int> match_row_, match_col_;
  std::vector<bool> fixed_col_;
};

// Solves the (possibly rectangular) problem padded with zero dummies and
// returns real (row, col) pairs sorted by row.
std::vector<std::pair<size_t, size_t>> SolveRectangular(
    size_t rows, size_t cols, const std::function<double(size_t, size_t)>& at) {
  const size_t n = std::max(rows, cols);
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) weight[r][c] = at(r, c);
  }
  const std::vector<int> assignment = SquareAssignment(std::move(weight)).Solve();
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t r = 0; r < rows; ++r) {
    const auto c = static_cast<size_t>(assignment[r]);
    if (c < cols) pairs.emplace_back(r, c);
  }
  return pairs;
}

void FillUnmatched(size_t rows, size_t cols, Matching* matching) {
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  for (const MatchedPair& pair : matching->pairs) {
    row_used[pair.row] = true;
    col_used[pair.col] = true;
  }
  for (size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) matching->unmatched_rows.push_back(r);
  }
  for (size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) matching->unmatched_cols.push_back(c);
  }
}

}  // namespace

SimMatrix::SimMatrix(size_t rows, size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  CheckEntry(fill);
}

SimMatrix SimMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  const size_t cols = rows.empty() ? 0 : rows.front().size();
  SimMatrix m(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged similarity matrix");
    for (size_t c = 0; c < cols; ++c) m.Set(r, c, rows[r][c]);
  }
  return m;
}

void SimMatrix::Set(size_t r, size_t c, double value) {
  CheckEntry(value);
  data_[r * cols_ + c] = value;
}

PrecisionRecall LegacyScores(const SimMatrix& m) {
  if (m.empty()) return {};
  double row_sum = 0.0;
  for (size_t r = 0; r < m.rows(); ++r) {
    double best = 0.0;
    for (size_t c = 0; c < m.cols(); ++c) best = std::max(best, m(r, c));
    row_sum += best;
  }
  double col_sum = 0.0;
  for (size_t c = 0; c < m.cols(); ++c) {
    double best = 0.0;
    for (size_t r = 0; r < m.rows(); ++r) best = std::max(best, m(r, c));
    col_sum += best;
  }
  return {row_sum / m.rows(), col_sum / m.cols()};
}

double Matching::Total() const {
  double total = 0.0;
  for (const MatchedPair& pair : pairs) total += pair.similarity;
  return total;
}

Matching Hungarian(const SimMatrix& m) {
  Matching matching;
  matching.kind = MatchKind::kOneToOne;
  if (!m.empty()) {
    for (const auto& [r, c] : SolveRectangular(
             m.rows(), m.cols(), [&](size_t r, size_t c) { return m(r, c); })) {
      matching.pairs.push_back({r, c, m(r, c)});
    }
  }
  FillUnmatched(m.rows(), m.cols(), &matching);
  return matching;
}

Matching RelaxedMatch(const SimMatrix& m, MatchKind side) {
  if (side == MatchKind::kOneToOne) return Hungarian(m);
  Matching matching;
  matching.kind = side;
  if (!m.empty()) {
    const bool gold_side = side == MatchKind::kGoldDuplicated;
    const size_t rows = gold_side ? m.rows() : 2 * m.rows();
    const size_t cols = gold_side ? 2 * m.cols() : m.cols();
    auto at = [&](size_t r, size_t c) { return m(r % m.rows(), c % m.cols()); };
    for (const auto& [r, c] : SolveRectangular(rows, cols, at)) {
      const size_t row = r % m.rows();
      const size_t col = c % m.cols();
      matching.pairs.push_back({row, col, m(row, col)});
    }
    std::sort(matching.pairs.begin(), matching.pairs.end(),
              [](const MatchedPair& a, const MatchedPair& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
  }
  FillUnmatched(m.rows(), m.cols(), &matching);
  return matching;
}

MatchScores ScoreMatching(const Matching& matching, size_t n_pred, size_t n_gold) {
  const double total = matching.Total();
  MatchScores scores;
  if (matching.kind != MatchKind::kPredDuplicated) {
    scores.precision = n_pred == 0 ? 0.0 : total / n_pred;
  }
  if (matching.kind != MatchKind::kGoldDuplicated) {
    scores.recall = n_gold == 0 ? 0.0 : total / n_gold;
  }
  return scores;
}

PrecisionRecall HungarianScores(const SimMatrix& m) {
  const MatchScores scores = ScoreMatching(Hungarian(m), m.rows(), m.cols());
  return {*scores.precision, *scores.recall};
}

PrecisionRecall RelaxedScores(const SimMatrix& m) {
  const MatchScores p = ScoreMatching(RelaxedMatch(m, MatchKind::kGoldDuplicated),
                                      m.rows(), m.cols());
  const MatchScores r = ScoreMatching(RelaxedMatch(m, MatchKind::kPredDuplicated),
                                      m.rows(), m.cols());
  return {*p.precision, *r.recall};
}

}  // namespace taskgraph
