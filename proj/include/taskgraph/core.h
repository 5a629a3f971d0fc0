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

// Domain types shared by every module: task graphs, step sequence sets,
// pairwise order labels and their JSON Lines encodings.

#ifndef TASKGRAPH_CORE_H_
#define TASKGRAPH_CORE_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace taskgraph {

using Json = nlohmann::json;

// Input that violates a record invariant. Maps to exit code 1 in the CLI.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file. Maps to exit code 2 in the CLI.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Step {
  std::string id;
  std::string text;

  bool operator==(const Step&) const = default;
};

// (from, to): `from` must be done before `to`.
using Edge = std::pair<std::string, std::string>;

struct TaskGraph {
  std::string task_id;
  std::string task;
  std::optional<std::string> context;
  std::vector<Step> steps;
  std::vector<Edge> edges;
  // Fields not part of the schema; kept so that re-serialization is lossless.
  Json extra = Json::object();

  // Position of the step with this id, or -1.
  int IndexOf(std::string_view id) const;
  std::vector<std::string> StepTexts() const;
  // Edges as (from index, to index) into `steps`. Assumes a validated graph.
  std::vector<std::pair<int, int>> IndexedEdges() const;
};

enum class Split { kTrain, kValidation, kTest };

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

struct Dataset {
  std::vector<TaskGraph> tasks;
  std::optional<std::map<std::string, Split>> split;

  const TaskGraph* Find(std::string_view task_id) const;
};

struct StepSequenceSet {
  std::string task_id;
  std::string task;
  std::optional<std::string> context;
  std::vector<std::vector<std::string>> sequences;
  Json extra = Json::object();
};

enum class OrderLabel { kBefore, kNotBefore };

struct PairwiseOrderLabel {
  std::string task_id;
  std::string step_a;
  std::string step_b;
  OrderLabel label = OrderLabel::kNotBefore;
};

enum class RecordKind { kGraph, kSequences, kLabels };

RecordKind ParseRecordKind(std::string_view name);

// Invariant checks. Each throws ValidationError naming the task and field.
void ValidateTaskGraph(const TaskGraph& graph);
void ValidateSequenceSet(const StepSequenceSet& set);
void ValidateLabel(const PairwiseOrderLabel& label);

// Builds a graph whose step ids are synthesized as s0..s(n-1) by position.
TaskGraph GraphFromTexts(const std::vector<std::string>& texts);

// JSON encodings. The *FromJson functions validate their result.
TaskGraph TaskGraphFromJson(const Json& record);
Json ToJson(const TaskGraph& graph);
StepSequenceSet SequenceSetFromJson(const Json& record);
Json ToJson(const StepSequenceSet& set);
PairwiseOrderLabel LabelFromJson(const Json& record);
Json ToJson(const PairwiseOrderLabel& label);

// Reads a JSON Lines file. Blank lines are skipped; every error message
// carries "path:line". Throws IoError when the file cannot be opened.
Dataset LoadGraphs(const std::string& path);
std::vector<StepSequenceSet> LoadSequences(const std::string& path);
std::vector<PairwiseOrderLabel> LoadLabels(const std::string& path);

using LoadedRecords = std::variant<Dataset, std::vector<StepSequenceSet>,
                                   std::vector<PairwiseOrderLabel>>;
LoadedRecords LoadJsonl(const std::string& path, RecordKind kind);

// Same parsers over an in-memory stream; `source` names it in errors.
Dataset ReadGraphs(std::istream& in, const std::string& source);
std::vector<StepSequenceSet> ReadSequences(std::istream& in,
                                           const std::string& source);
std::vector<PairwiseOrderLabel> ReadLabels(std::istream& in,
                                           const std::string& source);

// One compact JSON object per line, keys sorted.
void WriteGraphs(std::ostream& out, const Dataset& dataset);
void WriteSequences(std::ostream& out, const std::vector<StepSequenceSet>& sets);
void WriteLabels(std::ostream& out,
                 const std::vector<PairwiseOrderLabel>& labels);

// Writes `contents` to `path`, throwing IoError on failure.
void WriteFile(const std::string& path, const std::string& contents);

struct DagCheck {
  bool acyclic = true;
  // Step ids along one cycle when !acyclic; the closing edge returns from
  // the last id to the first.
  std::vector<std::string> cycle;
};

DagCheck ValidateDag(const TaskGraph& graph);

// reach[a][b]: a path of at least one edge leads from step a to step b.
std::vector<std::vector<bool>> Reachability(const TaskGraph& graph);

struct DatasetStats {
  size_t tasks = 0;
  size_t steps = 0;
  size_t edges = 0;
  double steps_per_task = 0.0;
  double edges_per_task = 0.0;
};

DatasetStats ComputeStats(const Dataset& dataset);

}  // namespace taskgraph

#endif  // TASKGRAPH_CORE_H_
