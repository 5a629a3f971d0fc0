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

#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace taskgraph {
namespace {

// Gold {v1, v2}; M1 = {u1, u2}; M2 = {u1, u1', u2} with u1' a near
// duplicate of u1. S(u1, v1) = S(u1', v1) = 0.6, all other pairs 0.
const SimMatrix kM1 = SimMatrix::FromRows({{0.6, 0.0}, {0.0, 0.0}});
const SimMatrix kM2 = SimMatrix::FromRows({{0.6, 0.0}, {0.6, 0.0}, {0.0, 0.0}});

TEST(SimMatrix, RejectsOutOfRange) {
  EXPECT_THROW(SimMatrix::FromRows({{0.5, 1.5}}), std::invalid_argument);
  EXPECT_THROW(SimMatrix::FromRows({{0.5}, {0.1, 0.2}}), std::invalid_argument);
  SimMatrix m(1, 1);
  EXPECT_THROW(m.Set(0, 0, -0.1), std::invalid_argument);
}

TEST(LegacyScores, DuplicationExploit) {
  const PrecisionRecall m1 = LegacyScores(kM1);
  EXPECT_NEAR(m1.precision, 0.3, 1e-12);
  EXPECT_NEAR(m1.recall, 0.3, 1e-12);
  const PrecisionRecall m2 = LegacyScores(kM2);
  EXPECT_NEAR(m2.precision, 0.4, 1e-12);
  EXPECT_NEAR(m2.recall, 0.3, 1e-12);
  const PrecisionRecall id = LegacyScores(SimMatrix::FromRows({{1, 0}, {0, 1}}));
  EXPECT_EQ(id.precision, 1.0);
  EXPECT_EQ(id.recall, 1.0);
  const PrecisionRecall empty = LegacyScores(SimMatrix(0, 3));
  EXPECT_EQ(empty.precision, 0.0);
  EXPECT_EQ(empty.recall, 0.0);
}

TEST(Hungarian, Examples) {
  const Matching m = Hungarian(SimMatrix::FromRows({{0.9, 0.1}, {0.2, 0.8}}));
  EXPECT_EQ(m.pairs, (std::vector<MatchedPair>{{0, 0, 0.9}, {1, 1, 0.8}}));
  EXPECT_NEAR(m.Total(), 1.7, 1e-15);

  const Matching m2 = Hungarian(kM2);
  EXPECT_NEAR(m2.Total(), 0.6, 1e-15);
  const MatchScores s = ScoreMatching(m2, 3, 2);
  EXPECT_NEAR(*s.precision, 0.2, 1e-12);
  EXPECT_NEAR(*s.recall, 0.3, 1e-12);
  EXPECT_EQ(m2.unmatched_rows.size(), 1u);
  EXPECT_TRUE(m2.unmatched_cols.empty());

  const Matching single = Hungarian(SimMatrix::FromRows({{0.5}}));
  EXPECT_EQ(single.pairs, (std::vector<MatchedPair>{{0, 0, 0.5}}));
}

TEST(Hungarian, TiesResolveLexicographically) {
  // Every permutation is optimal; the identity is the smallest.
  const Matching flat = Hungarian(SimMatrix(3, 3, 0.5));
  EXPECT_EQ(flat.pairs, (std::vector<MatchedPair>{{0, 0, 0.5}, {1, 1, 0.5}, {2, 2, 0.5}}));
  // Two optima {(0,1),(1,0)} and {(0,0),(1,1)} with equal totals.
  const Matching two = Hungarian(SimMatrix::FromRows({{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_EQ(two.pairs[0].col, 0u);
  // Zero-similarity real pairs are preferred over dummy columns.
  const Matching wide = Hungarian(SimMatrix(2, 3, 0.0));
  EXPECT_EQ(wide.pairs, (std::vector<MatchedPair>{{0, 0, 0.0}, {1, 1, 0.0}}));
  EXPECT_EQ(wide.unmatched_cols, (std::vector<size_t>{2}));
  const Matching tall = Hungarian(kM2);
  EXPECT_EQ(tall.pairs, (std::vector<MatchedPair>{{0, 0, 0.6}, {1, 1, 0.0}}));
}

TEST(Hungarian, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    const auto w = oracle::RandomMatrix(rng, rows, cols);
    const Matching m = Hungarian(SimMatrix::FromRows(w));
    ASSERT_EQ(m.pairs.size(), std::min(rows, cols));
    ASSERT_EQ(m.Total(), oracle::BestAssignmentTotal(w));
  }
}

TEST(RelaxedMatch, OneStepCoveringTwoGoldSteps) {
  // pred {add salt and pepper} vs gold {add salt, add pepper}.
  const SimMatrix m = SimMatrix::FromRows({{0.8, 0.8}});
  const Matching recall_side = RelaxedMatch(m, MatchKind::kPredDuplicated);
  EXPECT_EQ(recall_side.pairs, (std::vector<MatchedPair>{{0, 0, 0.8}, {0, 1, 0.8}}));
  EXPECT_NEAR(*ScoreMatching(recall_side, 1, 2).recall, 0.8, 1e-15);
  EXPECT_FALSE(ScoreMatching(recall_side, 1, 2).precision.has_value());
  const PrecisionRecall relaxed = RelaxedScores(m);
  EXPECT_NEAR(relaxed.precision, 0.8, 1e-15);
  EXPECT_NEAR(relaxed.recall, 0.8, 1e-15);
  EXPECT_NEAR(HungarianScores(m).recall, 0.4, 1e-15);
}

TEST(RelaxedMatch, DegenerateCases) {
  const SimMatrix perfect = SimMatrix::FromRows({{1, 0}, {0, 1}});
  for (MatchKind kind : {MatchKind::kGoldDuplicated, MatchKind::kPredDuplicated}) {
    EXPECT_EQ(RelaxedMatch(perfect, kind).Total(), Hungarian(perfect).Total());
    EXPECT_EQ(RelaxedMatch(SimMatrix::FromRows({{0.3}}), kind).pairs,
              Hungarian(SimMatrix::FromRows({{0.3}})).pairs);
  }
}

TEST(RelaxedMatch, MatchesCapacitatedBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    const auto w = oracle::RandomMatrix(rng, rows, cols);
    const SimMatrix m = SimMatrix::FromRows(w);
    const double hungarian = Hungarian(m).Total();
    const Matching gold_dup = RelaxedMatch(m, MatchKind::kGoldDuplicated);
    const Matching pred_dup = RelaxedMatch(m, MatchKind::kPredDuplicated);
    ASSERT_NEAR(gold_dup.Total(), oracle::BestCapacitatedTotal(w, 1, 2), 1e-12);
    ASSERT_NEAR(pred_dup.Total(), oracle::BestCapacitatedTotal(w, 2, 1), 1e-12);
    ASSERT_GE(gold_dup.Total(), hungarian - 1e-12);
    ASSERT_GE(pred_dup.Total(), hungarian - 1e-12);
    // Capacity bookkeeping.
    std::vector<int> col_use(cols, 0), row_use(rows, 0);
    for (const auto& p : gold_dup.pairs) ++col_use[p.col];
    for (const auto& p : pred_dup.pairs) ++row_use[p.row];
    for (int u : col_use) ASSERT_LE(u, 2);
    for (int u : row_use) ASSERT_LE(u, 2);
  }
}

TEST(ScoreMatching, EmptyAndZeroCounts) {
  const MatchScores s = ScoreMatching(Matching{}, 0, 0);
  EXPECT_EQ(*s.precision, 0.0);
  EXPECT_EQ(*s.recall, 0.0);
  const PrecisionRecall m1 = HungarianScores(kM1);
  EXPECT_NEAR(m1.precision, 0.3, 1e-12);
  EXPECT_NEAR(m1.recall, 0.3, 1e-12);
  EXPECT_EQ(HungarianScores(SimMatrix(0, 2)).precision, 0.0);
}

TEST(Assignment, DuplicateCanReachAnIdleGoldStep) {
  // A copy of a prediction is free to match a gold step that the original
  // could not take, so one-to-one precision is not monotone under copying.
  const SimMatrix m = SimMatrix::FromRows({{1, 1}, {0, 0}});
  EXPECT_EQ(HungarianScores(m).precision, 0.5);
  const SimMatrix md = SimMatrix::FromRows({{1, 1}, {0, 0}, {1, 1}});
  EXPECT_NEAR(HungarianScores(md).precision, 2.0 / 3.0, 1e-15);
  // Legacy rewards the copy even when no gold step is left for it.
  const SimMatrix tall = SimMatrix::FromRows({{0.6, 0.0}, {0.0, 0.0}, {0.2, 0.0}});
  const SimMatrix tall_dup =
      SimMatrix::FromRows({{0.6, 0.0}, {0.0, 0.0}, {0.2, 0.0}, {0.6, 0.0}});
  EXPECT_LT(HungarianScores(tall_dup).precision, HungarianScores(tall).precision);
  EXPECT_GT(LegacyScores(tall_dup).precision, LegacyScores(tall).precision);
}

TEST(Assignment, AntiGamingAndPermutationInvariance) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
    auto w = oracle::RandomMatrix(rng, rows, cols);
    const SimMatrix m = SimMatrix::FromRows(w);
    const PrecisionRecall base = HungarianScores(m);
    const PrecisionRecall legacy = LegacyScores(m);

    // Append a copy of the row holding the global maximum.
    size_t best_row = 0;
    double best = -1;
    for (size_t r = 0; r < rows; ++r) {
      for (double x : w[r]) {
        if (x > best) best = x, best_row = r;
      }
    }
    auto dup = w;
    dup.push_back(w[best_row]);
    const SimMatrix md = SimMatrix::FromRows(dup);
    // The copy can claim at most one extra gold step, worth at most the
    // row maximum; the original matching stays feasible.
    const double total = Hungarian(m).Total();
    const double dup_total = Hungarian(md).Total();
    ASSERT_GE(dup_total, total - 1e-12);
    ASSERT_LE(dup_total, total + best + 1e-12);
    ASSERT_LE(HungarianScores(md).precision, (total + best) / (rows + 1) + 1e-12);
    ASSERT_GE(LegacyScores(md).precision, legacy.precision - 1e-12);

    // Shuffle rows and columns.
    std::vector<size_t> rp(rows), cp(cols);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    oracle::Matrix shuffled(rows, std::vector<double>(cols));
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols; ++c) shuffled[r][c] = w[rp[r]][cp[c]];
    }
    const SimMatrix ms = SimMatrix::FromRows(shuffled);
    ASSERT_NEAR(Hungarian(ms).Total(), Hungarian(m).Total(), 1e-12);
    ASSERT_NEAR(HungarianScores(ms).recall, base.recall, 1e-12);
    ASSERT_NEAR(RelaxedScores(ms).precision, RelaxedScores(m).precision, 1e-12);
    ASSERT_NEAR(RelaxedScores(ms).recall, RelaxedScores(m).recall, 1e-12);
  }
}

}  // namespace
}  // namespace taskgraph
