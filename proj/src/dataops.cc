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

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "taskgraph/textnorm.h"

namespace taskgraph {
namespace internal {
extern const char kStopwordsData[];
}  // namespace internal

namespace {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

std::set<std::string> ParseStopwords(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto stop = line.find_last_not_of(" \t\r");
    words.insert(line.substr(start, stop - start + 1));
  }
  return words;
}

TaskGraph Chain(const std::vector<std::string>& texts) {
  TaskGraph graph = GraphFromTexts(texts);
  for (size_t i = 0; i + 1 < texts.size(); ++i) {
    graph.edges.emplace_back(graph.steps[i].id, graph.steps[i + 1].id);
  }
  return graph;
}

}  // namespace

size_t SeededRng::Below(size_t n) {
  const uint64_t bound = n;
  // Reject the low 2^64 mod n values so every residue is equally likely.
  const uint64_t threshold = (0 - bound) % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return static_cast<size_t>(x % bound);
}

ClusterAssignment ClusterSplit(const Dataset& tasks, const SimilarityProvider& provider,
                               double link_threshold, const SplitFractions& fractions,
                               uint64_t seed) {
  const double targets_fraction[] = {fractions.train, fractions.validation, fractions.test};
  for (double f : targets_fraction) {
    if (!(f > 0.0)) throw ValidationError("split fractions must be positive");
  }
  if (std::abs(fractions.train + fractions.validation + fractions.test - 1.0) > 1e-9) {
    throw ValidationError("split fractions must sum to 1");
  }
  const size_t n = tasks.tasks.size();
  UnionFind clusters(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (provider(tasks.tasks[i].task, tasks.tasks[j].task) > link_threshold) clusters.Union(i, j);
    }
  }
  // Cluster ids by first member; sizes per cluster.
  ClusterAssignment assignment;
  std::map<size_t, int> root_to_id;
  std::vector<size_t> cluster_size;
  for (size_t i = 0; i < n; ++i) {
    auto [it, inserted] =
        root_to_id.emplace(clusters.Find(i), static_cast<int>(cluster_size.size()));
    if (inserted) cluster_size.push_back(0);
    ++cluster_size[it->second];
    assignment.task_cluster[tasks.tasks[i].task_id] = it->second;
  }

  std::vector<int> order(cluster_size.size());
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed);
  rng.Shuffle(&order);

  const Split splits[] = {Split::kTrain, Split::kValidation, Split::kTest};
  double assigned[] = {0.0, 0.0, 0.0};
  for (int cluster : order) {
    size_t best = 0;
    double best_deficit = -1e300;
    for (size_t s = 0; s < 3; ++s) {
      const double deficit = targets_fraction[s] * n - assigned[s];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = s;
      }
    }
    assignment.cluster_split[cluster] = splits[best];
    assigned[best] += static_cast<double>(cluster_size[cluster]);
  }
  return assignment;
}

void WriteClusterAssignment(std::ostream& out, const Dataset& tasks,
                            const ClusterAssignment& assignment) {
  for (const TaskGraph& graph : tasks.tasks) {
    const int cluster = assignment.task_cluster.at(graph.task_id);
    out << Json{{"task_id", graph.task_id},
                {"cluster", cluster},
                {"split", SplitName(assignment.cluster_split.at(cluster))}}
               .dump()
        << '\n';
  }
}

TaskGraph RepeatTaskBaseline(const std::string& task, size_t m) {
  if (m == 0) throw ValidationError("repeat count must be at least 1");
  return Chain(std::vector<std::string>(m, task));
}

TaskGraph RepeatSimilarBaseline(const std::string& task, const EmbeddingStore& store,
                                const std::set<std::string>& stopwords,
                                const RepeatSimilarOptions& options,
                                std::vector<std::string>* warnings) {
  if (options.m == 0) throw ValidationError("repeat count must be at least 1");
  if (options.k == 0) throw ValidationError("neighbor count k must be at least 1");
  const TokenStream tokens = Tokenize(task);
  std::vector<size_t> replaceable;
  std::map<std::string, std::vector<std::string>> neighbors;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    if (stopwords.count(token) || !store.Contains(token)) continue;
    auto it = neighbors.find(token);
    if (it == neighbors.end()) {
      // Stopwords are never offered as replacements; asking for k extra per
      // stopword guarantees k survivors whenever the store has them.
      std::vector<std::string> nearest =
          TopKSimilarTokens(store, token, options.k + stopwords.size());
      std::erase_if(nearest, [&](const std::string& w) { return stopwords.count(w) > 0; });
      if (nearest.size() > options.k) nearest.resize(options.k);
      it = neighbors.emplace(token, std::move(nearest)).first;
    }
    if (!it->second.empty()) replaceable.push_back(i);
  }
  if (replaceable.empty()) {
    if (warnings != nullptr) {
      warnings->push_back("no replaceable token in task '" + task +
                          "', falling back to repeat-task");
    }
    return RepeatTaskBaseline(task, options.m);
  }
  SeededRng rng(options.seed);
  std::vector<std::string> steps;
  for (size_t s = 0; s < options.m; ++s) {
    const size_t position = replaceable[rng.Below(replaceable.size())];
    const std::vector<std::string>& candidates = neighbors.at(tokens[position]);
    TokenStream step = tokens;
    step[position] = candidates[rng.Below(candidates.size())];
    std::string text;
    for (const std::string& token : step) {
      if (!text.empty()) text.push_back(' ');
      text += token;
    }
    steps.push_back(std::move(text));
  }
  return Chain(steps);
}

const std::set<std::string>& DefaultStopwords() {
  static const std::set<std::string> words = [] {
    std::istringstream in(internal::kStopwordsData);
    return ParseStopwords(in);
  }();
  return words;
}

std::set<std::string> LoadStopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return ParseStopwords(in);
}

}  // namespace taskgraph
