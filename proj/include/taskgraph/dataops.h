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

// Dataset splitting and the non-LLM step-generation baselines.

#ifndef TASKGRAPH_DATAOPS_H_
#define TASKGRAPH_DATAOPS_H_

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "taskgraph/core.h"
#include "taskgraph/sim.h"

namespace taskgraph {

// Seeded generator: std::mt19937_64 for the bits and rejection sampling for
// bounded integers, so outputs match across standard libraries (the std
// distributions are implementation-defined).
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n); n > 0.
  size_t Below(size_t n);
  template <typename T>
  void Shuffle(std::vector<T>* items) {
    for (size_t i = items->size(); i > 1; --i) std::swap((*items)[i - 1], (*items)[Below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct SplitFractions {
  double train = 0.0;
  double validation = 0.0;
  double test = 0.0;
};

struct ClusterAssignment {
  std::map<std::string, int> task_cluster;
  std::map<int, Split> cluster_split;

  Split SplitOf(const std::string& task_id) const {
    return cluster_split.at(task_cluster.at(task_id));
  }
};

// Single-link clusters of task titles (pairs with similarity strictly above
// link_threshold are joined), numbered by their first task. Clusters are
// shuffled with `seed` and handed, in that order, to the split furthest
// below its target task count (ties: train, validation, test). Throws
// ValidationError unless the fractions are positive and sum to 1.
ClusterAssignment ClusterSplit(const Dataset& tasks, const SimilarityProvider& provider,
                               double link_threshold, const SplitFractions& fractions,
                               uint64_t seed);

// {"task_id", "cluster", "split"} per task, in dataset order.
void WriteClusterAssignment(std::ostream& out, const Dataset& tasks,
                            const ClusterAssignment& assignment);

// `m` copies of the task text chained s0 -> s1 -> ... Throws
// ValidationError when m == 0.
TaskGraph RepeatTaskBaseline(const std::string& task, size_t m);

struct RepeatSimilarOptions {
  size_t m = 1;
  size_t k = 20;
  uint64_t seed = 0;
};

// Like RepeatTaskBaseline, but each step is the tokenized task with one
// randomly chosen non-stopword token (present in the store) replaced by a
// random member of its top-k most similar non-stopword tokens. When no
// token is replaceable, falls back to RepeatTaskBaseline and appends a
// warning.
TaskGraph RepeatSimilarBaseline(const std::string& task, const EmbeddingStore& store,
                                const std::set<std::string>& stopwords,
                                const RepeatSimilarOptions& options,
                                std::vector<std::string>* warnings = nullptr);

// The shipped English stopword list.
const std::set<std::string>& DefaultStopwords();
// One word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> LoadStopwords(const std::string& path);

}  // namespace taskgraph

#endif  // TASKGRAPH_DATAOPS_H_
