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

#include "taskgraph/nodemetrics.h"

#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace taskgraph {
namespace {

using testing::DataPath;
using testing::RandomGraph;

SimilarityProvider FixtureProvider() {
  return SimilarityProvider::Embedding(std::make_shared<EmbeddingStore>(
      LoadEmbeddings(DataPath("fixtures/m_vectors.jsonl"), EmbeddingFormat::kStepJsonl)));
}

TaskGraph Texts(const std::vector<std::string>& texts) {
  TaskGraph g = GraphFromTexts(texts);
  g.task_id = "t";
  return g;
}

void ExpectPR(const RougeScore& s, double p, double r) {
  EXPECT_NEAR(s.precision, p, 1e-12);
  EXPECT_NEAR(s.recall, r, 1e-12);
  EXPECT_NEAR(s.f1, FBeta(s.precision, s.recall, 1.0), 1e-12);
  EXPECT_NEAR(s.f2, FBeta(s.precision, s.recall, 2.0), 1e-12);
}

TEST(EvalNodes, IdentityScoresOne) {
  const Dataset gold = LoadGraphs(DataPath("fixtures/sample_gold.jsonl"));
  for (const TaskGraph& g : gold.tasks) {
    const NodeScores s = EvalNodes(g, g, SimilarityProvider::Token());
    for (NodeFamily f : kNodeFamilies) {
      EXPECT_EQ(s[f].precision, 1.0) << NodeFamilyName(f);
      EXPECT_EQ(s[f].recall, 1.0);
      EXPECT_EQ(s[f].f1, 1.0);
      EXPECT_EQ(s[f].f2, 1.0);
    }
  }
}

TEST(EvalNodes, DuplicationFixture) {
  const TaskGraph gold = LoadGraphs(DataPath("fixtures/m_gold.jsonl")).tasks[0];
  const TaskGraph m1 = LoadGraphs(DataPath("fixtures/m1_pred.jsonl")).tasks[0];
  const TaskGraph m2 = LoadGraphs(DataPath("fixtures/m2_pred.jsonl")).tasks[0];
  const SimilarityProvider provider = FixtureProvider();

  const NodeScores s1 = EvalNodes(gold, m1, provider);
  ExpectPR(s1[NodeFamily::kLegacy], 0.3, 0.3);
  ExpectPR(s1[NodeFamily::kHungarian], 0.3, 0.3);

  const NodeScores s2 = EvalNodes(gold, m2, provider);
  ExpectPR(s2[NodeFamily::kLegacy], 0.4, 0.3);
  ExpectPR(s2[NodeFamily::kHungarian], 0.2, 0.3);
  // Two predictions may share v1 for precision: (0.6 + 0.6) / 3.
  ExpectPR(s2[NodeFamily::kRelaxedHungarian], 0.4, 0.3);
}

TEST(EvalNodes, DocumentRougeJoinsStepsInOrder) {
  TaskGraph gold = Texts({"add salt", "stir"});
  TaskGraph pred = Texts({"add salt", "stir"});
  const NodeScores s = EvalNodes(gold, pred, SimilarityProvider::Token());
  EXPECT_EQ(s[NodeFamily::kRouge2].precision, 1.0);
  pred = Texts({"stir", "add salt"});
  const NodeScores r = EvalNodes(gold, pred, SimilarityProvider::Token());
  EXPECT_EQ(r[NodeFamily::kRouge1].f1, 1.0);
  // Bigrams: gold {add salt, salt stir}, pred {stir add, add salt}.
  ExpectPR(r[NodeFamily::kRouge2], 0.5, 0.5);
  ExpectPR(r[NodeFamily::kRougeL], 2.0 / 3.0, 2.0 / 3.0);
  for (NodeFamily f : {NodeFamily::kLegacy, NodeFamily::kHungarian, NodeFamily::kRelaxedHungarian}) {
    EXPECT_EQ(r[f].f1, s[f].f1);
  }
}

TEST(EvalNodes, EmptyPredictionWarns) {
  const TaskGraph gold = Texts({"a", "b"});
  TaskGraph pred = gold;
  pred.steps.clear();
  pred.edges.clear();
  std::vector<std::string> warnings;
  const NodeScores s = EvalNodes(gold, pred, SimilarityProvider::Token(), &warnings);
  for (NodeFamily f : kNodeFamilies) EXPECT_EQ(s[f].f1, 0.0);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("'t'"), std::string::npos);

  pred.task_id = "other";
  EXPECT_THROW(EvalNodes(gold, pred, SimilarityProvider::Token()), ValidationError);
}

TEST(EvalNodes, CopiesCanClaimIdleGoldSteps) {
  // One-to-one matching stops a copy from reusing a gold step, but a copy
  // may still take a gold step nothing else matched.
  const TaskGraph gold = Texts({"add salt", "add pepper", "stir"});
  const TaskGraph pred = Texts({"add salt", "stir"});
  const TaskGraph doubled = Texts({"add salt", "stir", "add salt", "stir"});
  const SimilarityProvider token = SimilarityProvider::Token();
  const NodeScores s = EvalNodes(gold, pred, token);
  const NodeScores d = EvalNodes(gold, doubled, token);
  EXPECT_EQ(s[NodeFamily::kHungarian].precision, 1.0);
  // 1 + 1 + 0.5 over four predictions, not 2 / 4.
  EXPECT_NEAR(d[NodeFamily::kHungarian].precision, 2.5 / 4, 1e-15);
  EXPECT_EQ(d[NodeFamily::kLegacy].precision, 1.0);
}

TEST(EvalNodes, RandomProperties) {
  std::mt19937_64 rng(11);
  const SimilarityProvider token = SimilarityProvider::Token();
  for (int trial = 0; trial < 200; ++trial) {
    const TaskGraph gold = RandomGraph(rng, "t", 1 + rng() % 6, 0.3);
    const TaskGraph pred = RandomGraph(rng, "t", 1 + rng() % 6, 0.3, "p");
    const NodeScores s = EvalNodes(gold, pred, token);
    for (NodeFamily f : kNodeFamilies) {
      const RougeScore& x = s[f];
      for (double v : {x.precision, x.recall, x.f1, x.f2}) ASSERT_TRUE(v >= 0 && v <= 1);
      ASSERT_NEAR(x.f1, FBeta(x.precision, x.recall, 1.0), 1e-12);
    }
    const RougeScore& h = s[NodeFamily::kHungarian];
    const RougeScore& r = s[NodeFamily::kRelaxedHungarian];
    ASSERT_LE(h.precision, s[NodeFamily::kLegacy].precision + 1e-12);
    ASSERT_GE(r.precision, h.precision - 1e-12);
    ASSERT_GE(r.recall, h.recall - 1e-12);

    TaskGraph doubled = pred;
    for (const Step& step : pred.steps) doubled.steps.push_back({step.id + "_copy", step.text});
    const NodeScores d = EvalNodes(gold, doubled, token);
    // Matching the doubled list is the pred-duplicated relaxation.
    const SimMatrix m = BuildSimMatrix(pred.StepTexts(), gold.StepTexts(), token);
    const double relaxed_total = RelaxedMatch(m, MatchKind::kPredDuplicated).Total();
    ASSERT_NEAR(d[NodeFamily::kHungarian].precision, relaxed_total / (2 * pred.steps.size()), 1e-9);
    ASSERT_GE(d[NodeFamily::kHungarian].precision, h.precision / 2 - 1e-12);
    ASSERT_NEAR(d[NodeFamily::kHungarian].recall, r.recall, 1e-9);
    ASSERT_NEAR(d[NodeFamily::kLegacy].precision, s[NodeFamily::kLegacy].precision, 1e-9);
  }
}

Dataset RandomCorpus(std::mt19937_64& rng, size_t n, const std::string& prefix) {
  Dataset d;
  for (size_t i = 0; i < n; ++i) {
    d.tasks.push_back(RandomGraph(rng, "task" + std::to_string(i), 1 + rng() % 5, 0.3, prefix));
  }
  return d;
}

TEST(EvalCorpus, MacroAverage) {
  std::mt19937_64 rng(12);
  const Dataset gold = RandomCorpus(rng, 7, "g");
  const Dataset pred = RandomCorpus(rng, 7, "p");
  const NodeMetricsReport report = EvalCorpus(gold, pred, SimilarityProvider::Token());
  ASSERT_EQ(report.per_task.size(), 7u);
  for (NodeFamily f : kNodeFamilies) {
    double p = 0, r = 0, f1 = 0;
    for (const auto& [id, s] : report.per_task) {
      p += s[f].precision;
      r += s[f].recall;
      f1 += s[f].f1;
    }
    EXPECT_NEAR(report.corpus[f].precision, p / 7, 1e-12);
    EXPECT_NEAR(report.corpus[f].recall, r / 7, 1e-12);
    EXPECT_NEAR(report.corpus[f].f1, FBeta(p / 7, r / 7, 1.0), 1e-12);
    EXPECT_NEAR(report.corpus_mean_f[f].f1, f1 / 7, 1e-12);
  }
}

TEST(EvalCorpus, SingletonEqualsEvalNodes) {
  const Dataset gold = LoadGraphs(DataPath("fixtures/m_gold.jsonl"));
  const Dataset pred = LoadGraphs(DataPath("fixtures/m2_pred.jsonl"));
  const NodeMetricsReport report = EvalCorpus(gold, pred, FixtureProvider());
  const NodeScores s = EvalNodes(gold.tasks[0], pred.tasks[0], FixtureProvider());
  for (NodeFamily f : kNodeFamilies) {
    EXPECT_EQ(report.corpus[f].precision, s[f].precision);
    EXPECT_EQ(report.corpus[f].f2, s[f].f2);
  }
}

TEST(EvalCorpus, OrderAndThreadInvariant) {
  std::mt19937_64 rng(13);
  const Dataset gold = RandomCorpus(rng, 20, "g");
  Dataset pred = RandomCorpus(rng, 20, "p");
  const SimilarityProvider token = SimilarityProvider::Token();
  const std::string base = NodeReportToJson(EvalCorpus(gold, pred, token)).dump();
  std::shuffle(pred.tasks.begin(), pred.tasks.end(), rng);
  Dataset gold_shuffled = gold;
  std::shuffle(gold_shuffled.tasks.begin(), gold_shuffled.tasks.end(), rng);
  EXPECT_EQ(NodeReportToJson(EvalCorpus(gold_shuffled, pred, token)).dump(), base);
  EXPECT_EQ(NodeReportToJson(EvalCorpus(gold, pred, token, 4)).dump(), base);
}

TEST(EvalCorpus, CoverageErrorsNameTasks) {
  std::mt19937_64 rng(14);
  const Dataset gold = RandomCorpus(rng, 3, "g");
  Dataset pred = gold;
  pred.tasks.pop_back();
  try {
    EvalCorpus(gold, pred, SimilarityProvider::Token());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("task2"), std::string::npos);
  }
  pred = gold;
  pred.tasks.push_back(RandomGraph(rng, "stray", 2, 0.0));
  EXPECT_THROW(EvalCorpus(gold, pred, SimilarityProvider::Token()), ValidationError);
}

TEST(NodeReport, CsvAndJsonLayout) {
  const Dataset gold = LoadGraphs(DataPath("fixtures/sample_gold.jsonl"));
  const Dataset pred = LoadGraphs(DataPath("fixtures/sample_pred.jsonl"));
  const NodeMetricsReport report = EvalCorpus(gold, pred, SimilarityProvider::Token());
  const std::string csv = NodeReportToCsv(report);
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "metric,precision,recall,f1,f2");
  EXPECT_EQ(rows[1].rfind("rouge1,", 0), 0u);
  EXPECT_EQ(rows[6].rfind("relaxed_hungarian,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("rougeL,", 0), 0u);

  ReportOptions options;
  options.include_mean_f = true;
  EXPECT_EQ(NodeReportToCsv(report, options).substr(0, 40),
            "metric,precision,recall,f1,f2,f1_mean,f2");

  const Json json = NodeReportToJson(report);
  EXPECT_TRUE(json.contains("per_task"));
  EXPECT_DOUBLE_EQ(json["corpus"]["hungarian"]["precision"].get<double>(),
                   report.corpus[NodeFamily::kHungarian].precision);
  options.include_per_task = false;
  EXPECT_FALSE(NodeReportToJson(report, options).contains("per_task"));
}

}  // namespace
}  // namespace taskgraph
