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

#include "taskgraph/dataops.h"

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.h"

namespace taskgraph {
namespace {

Dataset Tasks(std::mt19937_64& rng, size_t n) {
  Dataset d;
  for (size_t i = 0; i < n; ++i) {
    d.tasks.push_back(testing::RandomGraph(rng, "task" + std::to_string(i), 2, 0.5));
    d.tasks.back().task = testing::RandomStepText(rng);
  }
  return d;
}

TEST(SeededRng, BelowIsInRangeAndReproducible) {
  SeededRng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const size_t n = 1 + i % 13;
    const size_t x = a.Below(n);
    ASSERT_LT(x, n);
    ASSERT_EQ(x, b.Below(n));
  }
  std::vector<int> items = {1, 2, 3, 4, 5, 6};
  SeededRng(3).Shuffle(&items);
  std::vector<int> again = {1, 2, 3, 4, 5, 6};
  SeededRng(3).Shuffle(&again);
  EXPECT_EQ(items, again);
  std::sort(items.begin(), items.end());
  EXPECT_EQ(items, (std::vector<int>{1, 2, 3, 4, 5, 6}));
}

TEST(ClusterSplit, SingletonClustersHitTargets) {
  std::mt19937_64 rng(41);
  const Dataset d = Tasks(rng, 100);
  const ClusterAssignment a =
      ClusterSplit(d, SimilarityProvider::Token(), 1.0, {0.6, 0.1, 0.3}, 5);
  std::set<int> clusters;
  std::map<Split, int> counts;
  for (const TaskGraph& t : d.tasks) {
    clusters.insert(a.task_cluster.at(t.task_id));
    ++counts[a.SplitOf(t.task_id)];
  }
  EXPECT_EQ(clusters.size(), 100u);
  EXPECT_NEAR(counts[Split::kTrain], 60, 1);
  EXPECT_NEAR(counts[Split::kValidation], 10, 1);
  EXPECT_NEAR(counts[Split::kTest], 30, 1);
}

TEST(ClusterSplit, SimilarTasksShareASplit) {
  std::mt19937_64 rng(42);
  const SimilarityProvider token = SimilarityProvider::Token();
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = Tasks(rng, 40);
    const double threshold = 0.3 + 0.1 * (trial % 5);
    const ClusterAssignment a = ClusterSplit(d, token, threshold, {0.6, 0.1, 0.3}, trial);
    std::map<int, int> cluster_size;
    for (const auto& [id, c] : a.task_cluster) ++cluster_size[c];
    int largest = 0;
    for (const auto& [c, size] : cluster_size) largest = std::max(largest, size);
    for (const TaskGraph& x : d.tasks) {
      for (const TaskGraph& y : d.tasks) {
        if (token(x.task, y.task) > threshold) {
          ASSERT_EQ(a.task_cluster.at(x.task_id), a.task_cluster.at(y.task_id));
          ASSERT_EQ(a.SplitOf(x.task_id), a.SplitOf(y.task_id));
        }
      }
    }
    std::map<Split, int> counts;
    for (const TaskGraph& t : d.tasks) ++counts[a.SplitOf(t.task_id)];
    ASSERT_LE(std::abs(counts[Split::kTrain] - 24.0), largest);
    ASSERT_LE(std::abs(counts[Split::kValidation] - 4.0), largest);
    ASSERT_LE(std::abs(counts[Split::kTest] - 12.0), largest);
  }
}

TEST(ClusterSplit, DeterministicAndValidated) {
  std::mt19937_64 rng(43);
  const Dataset d = Tasks(rng, 30);
  const auto token = SimilarityProvider::Token();
  auto render = [&](uint64_t seed) {
    std::ostringstream out;
    WriteClusterAssignment(out, d, ClusterSplit(d, token, 0.5, {0.6, 0.1, 0.3}, seed));
    return out.str();
  };
  EXPECT_EQ(render(9), render(9));
  EXPECT_NE(render(9).find("\"split\""), std::string::npos);
  EXPECT_THROW(ClusterSplit(d, token, 0.5, {0.6, 0.1, 0.2}, 1), ValidationError);
  EXPECT_THROW(ClusterSplit(d, token, 0.5, {0.7, 0.0, 0.3}, 1), ValidationError);
}

TEST(RepeatTaskBaseline, Examples) {
  const TaskGraph g = RepeatTaskBaseline("plan a wedding", 3);
  ASSERT_EQ(g.steps.size(), 3u);
  for (const Step& s : g.steps) EXPECT_EQ(s.text, "plan a wedding");
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(RepeatTaskBaseline("plan a wedding", 1).edges.empty());
  EXPECT_THROW(RepeatTaskBaseline("plan a wedding", 0), ValidationError);
}

EmbeddingStore SmoothieStore() {
  EmbeddingStore store;
  store.Insert("smoothie", {1, 0, 0});
  store.Insert("yogurt", {0.9, 0.1, 0});
  store.Insert("juice", {0.8, 0.3, 0});
  store.Insert("car", {0, 0, 1});
  store.Insert("a", {0.99, 0.01, 0});
  return store;
}

TEST(RepeatSimilarBaseline, ReplacesContentWords) {
  const EmbeddingStore store = SmoothieStore();
  RepeatSimilarOptions options;
  options.m = 6;
  options.k = 2;
  options.seed = 1;
  const TaskGraph g = RepeatSimilarBaseline("Make a smoothie", store, DefaultStopwords(), options);
  ASSERT_EQ(g.steps.size(), 6u);
  EXPECT_EQ(g.edges.size(), 5u);
  for (const Step& s : g.steps) {
    // "a" is a stopword; only "smoothie" is replaceable, by its two nearest
    // neighbours ("a" itself is excluded as a stopword).
    EXPECT_TRUE(s.text == "make a yogurt" || s.text == "make a juice") << s.text;
  }
  const TaskGraph again = RepeatSimilarBaseline("Make a smoothie", store, DefaultStopwords(), options);
  EXPECT_EQ(ToJson(g).dump(), ToJson(again).dump());
}

TEST(RepeatSimilarBaseline, FallsBackWithoutReplaceableToken) {
  const EmbeddingStore store = SmoothieStore();
  std::vector<std::string> warnings;
  RepeatSimilarOptions options;
  options.m = 2;
  const TaskGraph g =
      RepeatSimilarBaseline("plan the wedding", store, DefaultStopwords(), options, &warnings);
  ASSERT_EQ(g.steps.size(), 2u);
  EXPECT_EQ(g.steps[0].text, "plan the wedding");
  EXPECT_EQ(warnings.size(), 1u);
  options.m = 0;
  EXPECT_THROW(RepeatSimilarBaseline("make a smoothie", store, DefaultStopwords(), options),
               ValidationError);
}

TEST(Stopwords, DefaultAndFile) {
  EXPECT_TRUE(DefaultStopwords().count("the"));
  EXPECT_TRUE(DefaultStopwords().count("a"));
  EXPECT_FALSE(DefaultStopwords().count("smoothie"));
  EXPECT_EQ(LoadStopwords(testing::DataPath("stopwords.txt")), DefaultStopwords());
  EXPECT_THROW(LoadStopwords("/nonexistent/stopwords.txt"), IoError);
}

}  // namespace
}  // namespace taskgraph
