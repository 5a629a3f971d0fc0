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

// Graph construction from generated step sequences and pairwise labels.

#ifndef TASKGRAPH_GRAPHOPS_H_
#define TASKGRAPH_GRAPHOPS_H_

#include <string>
#include <utility>
#include <vector>

#include "taskgraph/core.h"
#include "taskgraph/sim.h"

namespace taskgraph {

// Chain s0 -> s1 -> ... over the sequence. Throws ValidationError if the
// sequence is empty or repeats a step after normalization.
TaskGraph LinearGraph(const std::vector<std::string>& steps);

enum class AggregateOutput { kReduction, kClosure };

AggregateOutput ParseAggregateOutput(std::string_view name);

// Builds a graph over the union of steps (identified by normalized text,
// first spelling kept, first-occurrence order) in which a precedes b iff
// they co-occur in at least one sequence and a comes first in every
// sequence containing both. When partially overlapping sequences make that
// relation cyclic, the cycles are removed as in Decycle before closing.
TaskGraph AggregateSequences(const StepSequenceSet& set,
                             AggregateOutput output = AggregateOutput::kReduction);

// Transitive closure / reduction of an acyclic graph; step list unchanged,
// edges sorted by step position.
TaskGraph TransitiveClosure(const TaskGraph& dag);
TaskGraph TransitiveReduction(const TaskGraph& dag);

// Strongly connected components as step indices; components are listed in
// order of their smallest member and each is sorted.
std::vector<std::vector<int>> StronglyConnectedComponents(const TaskGraph& graph);

// Removes every edge whose endpoints share a strongly connected component
// of size >= 2; the remaining edges keep their order.
TaskGraph Decycle(const TaskGraph& graph);

// Edge a -> b for every "before" label, then Decycle. Labels must reference
// the given steps; a pair labeled both ways throws ValidationError.
TaskGraph LabelsToGraph(const std::vector<Step>& steps,
                        const std::vector<PairwiseOrderLabel>& labels);

// Concatenates the sequences in order, dropping any step whose similarity
// to an already kept step is strictly above `threshold`.
std::vector<std::string> DedupMerge(const StepSequenceSet& set, const SimilarityProvider& provider,
                                    double threshold);

struct LabeledPair {
  std::string a;
  std::string b;
  bool duplicate = false;
};

struct ThresholdFit {
  double threshold = 0.0;
  double accuracy = 0.0;
};

// Candidate thresholds are 0, 1 and the midpoints between consecutive
// distinct similarity values; a pair is predicted duplicate iff its
// similarity is strictly above the threshold. Returns the most accurate
// candidate, the smallest one on ties. Throws ValidationError when empty.
ThresholdFit FitDedupThreshold(const std::vector<std::pair<double, bool>>& scored);
ThresholdFit FitDedupThreshold(const std::vector<LabeledPair>& pairs,
                               const SimilarityProvider& provider);

struct ScoredSequence {
  std::string task_id;
  std::vector<std::string> steps;
  double score = 0.0;
};

ScoredSequence ScoredSequenceFromJson(const Json& record);
Json ToJson(const ScoredSequence& sequence);
std::vector<ScoredSequence> LoadScoredSequences(const std::string& path);
std::vector<ScoredSequence> ReadScoredSequences(std::istream& in, const std::string& source);
void WriteScoredSequences(std::ostream& out, const std::vector<ScoredSequence>& sequences);

// One record per candidate sequence, scored by the one-to-one matching F1
// against the gold steps of its task. Throws ValidationError for task ids
// absent from gold.
std::vector<ScoredSequence> BuildSfTrainingSet(const Dataset& gold,
                                               const std::vector<StepSequenceSet>& candidates,
                                               const SimilarityProvider& provider);

// All single swaps (i, j), i < j, in lexicographic (i, j) order, truncated
// to `limit`.
std::vector<std::vector<std::string>> SwapCandidates(const std::vector<std::string>& steps,
                                                     size_t limit);

// Highest scores first (stable), keeping ceil(keep_fraction * n) records.
// Throws ValidationError unless keep_fraction is in (0, 1].
std::vector<ScoredSequence> SelectTopSequences(std::vector<ScoredSequence> scored,
                                               double keep_fraction);

}  // namespace taskgraph

#endif  // TASKGRAPH_GRAPHOPS_H_
