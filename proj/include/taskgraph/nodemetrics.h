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

// Step-quality evaluation of a predicted task graph against its gold graph.

#ifndef TASKGRAPH_NODEMETRICS_H_
#define TASKGRAPH_NODEMETRICS_H_

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "taskgraph/assign.h"
#include "taskgraph/core.h"
#include "taskgraph/sim.h"
#include "taskgraph/textnorm.h"

namespace taskgraph {

enum class NodeFamily { kRouge1, kRouge2, kRougeL, kLegacy, kHungarian, kRelaxedHungarian };

inline constexpr std::array<NodeFamily, 6> kNodeFamilies = {
    NodeFamily::kRouge1, NodeFamily::kRouge2,    NodeFamily::kRougeL,
    NodeFamily::kLegacy, NodeFamily::kHungarian, NodeFamily::kRelaxedHungarian};

std::string_view NodeFamilyName(NodeFamily family);

// Precision, recall, F1 and F2 per metric family.
struct NodeScores {
  std::array<RougeScore, kNodeFamilies.size()> family;

  RougeScore& operator[](NodeFamily f) { return family[static_cast<size_t>(f)]; }
  const RougeScore& operator[](NodeFamily f) const {
    return family[static_cast<size_t>(f)];
  }
};

struct NodeMetricsReport {
  // Macro average of per-task precision and recall, F recomputed from them.
  NodeScores corpus;
  // Mean of per-task F1/F2 (precision/recall as in `corpus`); emitted only
  // when requested.
  NodeScores corpus_mean_f;
  std::map<std::string, NodeScores> per_task;
  std::vector<std::string> warnings;
};

// Predicted steps are rows, gold steps columns.
SimMatrix BuildSimMatrix(const std::vector<std::string>& pred,
                         const std::vector<std::string>& gold,
                         const SimilarityProvider& provider);

// Scores one task. A prediction without steps scores 0 everywhere and
// appends a warning instead of throwing.
NodeScores EvalNodes(const TaskGraph& gold, const TaskGraph& pred,
                     const SimilarityProvider& provider,
                     std::vector<std::string>* warnings = nullptr);

// Every gold task needs exactly one prediction; missing or extra task ids
// throw ValidationError listing them. `jobs` > 1 evaluates tasks on worker
// threads; the result does not depend on it.
NodeMetricsReport EvalCorpus(const Dataset& gold, const Dataset& preds,
                             const SimilarityProvider& provider, int jobs = 1);

// Throws ValidationError unless preds covers exactly the gold task ids.
void CheckPredictionCoverage(const Dataset& gold, const Dataset& preds);

struct ReportOptions {
  bool include_per_task = true;
  bool include_mean_f = false;
};

Json NodeReportToJson(const NodeMetricsReport& report, const ReportOptions& options = {});
// Header "metric,precision,recall,f1,f2" and one row per family, in
// kNodeFamilies order. With include_mean_f, two extra columns
// "f1_mean,f2_mean" follow.
std::string NodeReportToCsv(const NodeMetricsReport& report,
                            const ReportOptions& options = {});

}  // namespace taskgraph

#endif  // TASKGRAPH_NODEMETRICS_H_
