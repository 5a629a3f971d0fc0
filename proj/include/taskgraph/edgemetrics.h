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

// Temporal-dependency evaluation.
//
// Gold and predicted nodes are aligned one-to-one; nodes left over on
// either side are paired with a dummy that has no parents and no children.
// For every pair the parent sets, child sets and their unions are compared
// with Rouge F1 after rendering each set as a document (member texts sorted
// and joined by spaces). Two empty sets agree perfectly (1), exactly one
// empty set scores 0. A pair involving the dummy scores 0 in every family.
// Averages run over all pairs, dummies included.

#ifndef TASKGRAPH_EDGEMETRICS_H_
#define TASKGRAPH_EDGEMETRICS_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taskgraph/core.h"
#include "taskgraph/sim.h"

namespace taskgraph {

struct AlignedPair {
  // nullopt stands for the dummy singleton.
  std::optional<Step> gold_node;
  std::optional<Step> pred_node;
  // Step texts, sorted.
  std::vector<std::string> gold_parents, gold_children;
  std::vector<std::string> pred_parents, pred_children;
};

// Matched pairs in gold order, then unmatched gold nodes, then unmatched
// predicted nodes.
std::vector<AlignedPair> AlignNodes(const TaskGraph& gold, const TaskGraph& pred,
                                    const SimilarityProvider& provider);

enum class EdgeFamily { kInDegree, kOutDegree, kStepProximity };
inline constexpr std::array<EdgeFamily, 3> kEdgeFamilies = {
    EdgeFamily::kInDegree, EdgeFamily::kOutDegree, EdgeFamily::kStepProximity};
std::string_view EdgeFamilyName(EdgeFamily family);

// Rouge-1, Rouge-2 and Rouge-L F1 of one edge family.
struct RougeTriple {
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
};

struct EdgeScores {
  std::array<RougeTriple, kEdgeFamilies.size()> family;

  RougeTriple& operator[](EdgeFamily f) { return family[static_cast<size_t>(f)]; }
  const RougeTriple& operator[](EdgeFamily f) const { return family[static_cast<size_t>(f)]; }
};

// Rouge F1 triple between two step-text sets under the empty-set rules.
RougeTriple SetOverlap(const std::vector<std::string>& gold_set,
                       const std::vector<std::string>& pred_set);

EdgeScores EvalEdges(const TaskGraph& gold, const TaskGraph& pred,
                     const SimilarityProvider& provider);

struct EdgeMetricsReport {
  EdgeScores corpus;  // macro average over tasks
  std::map<std::string, EdgeScores> per_task;
};

EdgeMetricsReport EvalEdgesCorpus(const Dataset& gold, const Dataset& preds,
                                  const SimilarityProvider& provider, int jobs = 1);

Json EdgeReportToJson(const EdgeMetricsReport& report, bool include_per_task = true);
// Header "metric,rouge1,rouge2,rougeL"; rows in_degree, out_degree,
// step_proximity.
std::string EdgeReportToCsv(const EdgeMetricsReport& report);

// Fraction of labels agreeing with gold reachability ("before" iff a path
// step_a -> step_b exists). Throws ValidationError on unknown task or step
// ids. Returns 0 for an empty label list.
double EvalPairwiseLabels(const TaskGraph& gold, const std::vector<PairwiseOrderLabel>& labels);
double EvalPairwiseLabels(const Dataset& gold, const std::vector<PairwiseOrderLabel>& labels);

// All ordered pairs (a, b), a != b, of each gold task, labeled by gold
// reachability. This is the probe set the majority-class baseline is
// measured on.
std::vector<PairwiseOrderLabel> GoldPairwiseLabels(const Dataset& gold);

}  // namespace taskgraph

#endif  // TASKGRAPH_EDGEMETRICS_H_
