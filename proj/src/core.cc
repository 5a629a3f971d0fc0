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

#include "taskgraph/core.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "taskgraph/textnorm.h"

namespace taskgraph {
namespace {

std::string Quote(std::string_view s) {
  return "'" + std::string(s) + "'";
}

[[noreturn]] void Fail(std::string_view task_id, const std::string& what) {
  throw ValidationError("task " + Quote(task_id) + ": " + what);
}

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

const Json& Require(const Json& record, const char* field,
                    std::string_view task_id) {
  auto it = record.find(field);
  if (it == record.end()) Fail(task_id, std::string("missing field '") + field + "'");
  return *it;
}

std::string RequireString(const Json& record, const char* field,
                          std::string_view task_id) {
  const Json& value = Require(record, field, task_id);
  if (!value.is_string()) {
    Fail(task_id, std::string("field '") + field + "' must be a string");
  }
  return value.get<std::string>();
}

std::optional<std::string> OptionalString(const Json& record,
                                          const char* field,
                                          std::string_view task_id) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    Fail(task_id, std::string("field '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::string RecordTaskId(const Json& record) {
  if (!record.is_object()) throw ValidationError("record is not a JSON object");
  auto it = record.find("task_id");
  if (it == record.end() || !it->is_string()) {
    throw ValidationError("missing string field 'task_id'");
  }
  return it->get<std::string>();
}

Json ExtraFields(const Json& record, std::initializer_list<const char*> known) {
  Json extra = Json::object();
  for (auto it = record.begin(); it != record.end(); ++it) {
    bool is_known = false;
    for (const char* name : known) is_known = is_known || it.key() == name;
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

std::vector<std::string> StringList(const Json& value, const std::string& what,
                                    std::string_view task_id) {
  if (!value.is_array()) Fail(task_id, what + " must be an array");
  std::vector<std::string> out;
  for (const Json& item : value) {
    if (!item.is_string()) Fail(task_id, what + " must contain strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

// Calls `parse(record)` for every nonblank line, prefixing errors with the
// source location.
template <typename Fn>
void ForEachRecord(std::istream& in, const std::string& source, Fn parse) {
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const std::string where = source + ":" + std::to_string(line_number) + ": ";
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError(where + "malformed JSON: " + e.what());
    }
    try {
      parse(record);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  if (in.bad()) throw IoError(source + ": read error");
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return in;
}

}  // namespace

int TaskGraph::IndexOf(std::string_view id) const {
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> TaskGraph::StepTexts() const {
  std::vector<std::string> texts;
  texts.reserve(steps.size());
  for (const Step& step : steps) texts.push_back(step.text);
  return texts;
}

std::vector<std::pair<int, int>> TaskGraph::IndexedEdges() const {
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < steps.size(); ++i) {
    index.emplace(steps[i].id, static_cast<int>(i));
  }
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (const auto& [from, to] : edges) out.emplace_back(index.at(from), index.at(to));
  return out;
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split " + Quote(name) +
                        " (expected train, validation or test)");
}

const TaskGraph* Dataset::Find(std::string_view task_id) const {
  for (const TaskGraph& graph : tasks) {
    if (graph.task_id == task_id) return &graph;
  }
  return nullptr;
}

RecordKind ParseRecordKind(std::string_view name) {
  if (name == "graph") return RecordKind::kGraph;
  if (name == "sequences") return RecordKind::kSequences;
  if (name == "labels") return RecordKind::kLabels;
  throw ValidationError("unknown record kind " + Quote(name) +
                        " (expected graph, sequences or labels)");
}

void ValidateTaskGraph(const TaskGraph& graph) {
  const std::string& tid = graph.task_id;
  if (tid.empty()) throw ValidationError("empty task_id");
  std::unordered_set<std::string> ids;
  for (const Step& step : graph.steps) {
    if (step.id.empty()) Fail(tid, "step with empty id");
    if (!ids.insert(step.id).second) Fail(tid, "duplicate step id " + Quote(step.id));
    if (IsBlank(step.text)) Fail(tid, "step " + Quote(step.id) + " has empty text");
  }
  std::set<Edge> seen;
  for (const Edge& edge : graph.edges) {
    for (const std::string* end : {&edge.first, &edge.second}) {
      if (!ids.count(*end)) {
        Fail(tid, "edge [" + edge.first + ", " + edge.second +
                      "] references unknown step " + Quote(*end));
      }
    }
    if (edge.first == edge.second) Fail(tid, "self-loop on step " + Quote(edge.first));
    if (!seen.insert(edge).second) {
      Fail(tid, "duplicate edge [" + edge.first + ", " + edge.second + "]");
    }
  }
}

void ValidateSequenceSet(const StepSequenceSet& set) {
  const std::string& tid = set.task_id;
  if (tid.empty()) throw ValidationError("empty task_id");
  if (set.sequences.empty()) Fail(tid, "no sequences");
  for (size_t s = 0; s < set.sequences.size(); ++s) {
    const auto& sequence = set.sequences[s];
    const std::string where = "sequence " + std::to_string(s);
    if (sequence.empty()) Fail(tid, where + " is empty");
    std::unordered_set<std::string> normalized;
    for (const std::string& text : sequence) {
      if (IsBlank(text)) Fail(tid, where + " has an empty step");
      if (!normalized.insert(NormalizeText(text)).second) {
        Fail(tid, where + " repeats step " + Quote(text));
      }
    }
  }
}

void ValidateLabel(const PairwiseOrderLabel& label) {
  if (label.task_id.empty()) throw ValidationError("empty task_id");
  if (label.step_a.empty() || label.step_b.empty()) {
    Fail(label.task_id, "empty step id in label");
  }
  if (label.step_a == label.step_b) {
    Fail(label.task_id, "label compares step " + Quote(label.step_a) + " with itself");
  }
}

TaskGraph GraphFromTexts(const std::vector<std::string>& texts) {
  TaskGraph graph;
  graph.steps.reserve(texts.size());
  for (size_t i = 0; i < texts.size(); ++i) {
    graph.steps.push_back(Step{"s" + std::to_string(i), texts[i]});
  }
  return graph;
}

TaskGraph TaskGraphFromJson(const Json& record) {
  TaskGraph graph;
  graph.task_id = RecordTaskId(record);
  const std::string& tid = graph.task_id;
  graph.task = RequireString(record, "task", tid);
  graph.context = OptionalString(record, "context", tid);
  const Json& steps = Require(record, "steps", tid);
  if (!steps.is_array()) Fail(tid, "field 'steps' must be an array");
  for (const Json& step : steps) {
    if (!step.is_object()) Fail(tid, "each step must be an object with id and text");
    graph.steps.push_back(
        Step{RequireString(step, "id", tid), RequireString(step, "text", tid)});
  }
  auto edges = record.find("edges");
  if (edges != record.end()) {
    if (!edges->is_array()) Fail(tid, "field 'edges' must be an array");
    for (const Json& edge : *edges) {
      if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
          !edge[1].is_string()) {
        Fail(tid, "each edge must be a [from_id, to_id] pair of strings");
      }
      graph.edges.emplace_back(edge[0].get<std::string>(), edge[1].get<std::string>());
    }
  }
  graph.extra = ExtraFields(record, {"task_id", "task", "context", "steps", "edges"});
  ValidateTaskGraph(graph);
  return graph;
}

Json ToJson(const TaskGraph& graph) {
  Json record = graph.extra;
  record["task_id"] = graph.task_id;
  record["task"] = graph.task;
  if (graph.context) record["context"] = *graph.context;
  Json steps = Json::array();
  for (const Step& step : graph.steps) {
    steps.push_back({{"id", step.id}, {"text", step.text}});
  }
  record["steps"] = std::move(steps);
  Json edges = Json::array();
  for (const auto& [from, to] : graph.edges) edges.push_back({from, to});
  record["edges"] = std::move(edges);
  return record;
}

StepSequenceSet SequenceSetFromJson(const Json& record) {
  StepSequenceSet set;
  set.task_id = RecordTaskId(record);
  const std::string& tid = set.task_id;
  set.task = RequireString(record, "task", tid);
  set.context = OptionalString(record, "context", tid);
  const Json& sequences = Require(record, "sequences", tid);
  if (!sequences.is_array()) Fail(tid, "field 'sequences' must be an array");
  for (const Json& sequence : sequences) {
    set.sequences.push_back(StringList(sequence, "each sequence", tid));
  }
  set.extra = ExtraFields(record, {"task_id", "task", "context", "sequences"});
  ValidateSequenceSet(set);
  return set;
}

Json ToJson(const StepSequenceSet& set) {
  Json record = set.extra;
  record["task_id"] = set.task_id;
  record["task"] = set.task;
  if (set.context) record["context"] = *set.context;
  record["sequences"] = set.sequences;
  return record;
}

PairwiseOrderLabel LabelFromJson(const Json& record) {
  PairwiseOrderLabel label;
  label.task_id = RecordTaskId(record);
  label.step_a = RequireString(record, "step_a", label.task_id);
  label.step_b = RequireString(record, "step_b", label.task_id);
  const std::string value = RequireString(record, "label", label.task_id);
  if (value == "before") {
    label.label = OrderLabel::kBefore;
  } else if (value == "not_before") {
    label.label = OrderLabel::kNotBefore;
  } else {
    Fail(label.task_id, "label must be 'before' or 'not_before', got " + Quote(value));
  }
  ValidateLabel(label);
  return label;
}

Json ToJson(const PairwiseOrderLabel& label) {
  return Json{{"task_id", label.task_id},
              {"step_a", label.step_a},
              {"step_b", label.step_b},
              {"label", label.label == OrderLabel::kBefore ? "before" : "not_before"}};
}

Dataset ReadGraphs(std::istream& in, const std::string& source) {
  Dataset dataset;
  std::unordered_set<std::string> task_ids;
  std::map<std::string, Split> split;
  size_t with_split = 0;
  ForEachRecord(in, source, [&](const Json& record) {
    TaskGraph graph = TaskGraphFromJson(record);
    if (!task_ids.insert(graph.task_id).second) {
      throw ValidationError("duplicate task_id " + Quote(graph.task_id));
    }
    auto it = graph.extra.find("split");
    if (it != graph.extra.end()) {
      if (!it->is_string()) Fail(graph.task_id, "field 'split' must be a string");
      split[graph.task_id] = ParseSplit(it->get<std::string>());
      graph.extra.erase(it);
      ++with_split;
    }
    dataset.tasks.push_back(std::move(graph));
  });
  if (with_split > 0) {
    if (with_split != dataset.tasks.size()) {
      throw ValidationError(source + ": " + std::to_string(with_split) + " of " +
                            std::to_string(dataset.tasks.size()) +
                            " tasks carry a split; either all or none must");
    }
    dataset.split = std::move(split);
  }
  return dataset;
}

std::vector<StepSequenceSet> ReadSequences(std::istream& in,
                                           const std::string& source) {
  std::vector<StepSequenceSet> sets;
  ForEachRecord(in, source, [&](const Json& record) {
    sets.push_back(SequenceSetFromJson(record));
  });
  return sets;
}

std::vector<PairwiseOrderLabel> ReadLabels(std::istream& in,
                                           const std::string& source) {
  std::vector<PairwiseOrderLabel> labels;
  ForEachRecord(in, source, [&](const Json& record) {
    labels.push_back(LabelFromJson(record));
  });
  return labels;
}

Dataset LoadGraphs(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ReadGraphs(in, path);
}

std::vector<StepSequenceSet> LoadSequences(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ReadSequences(in, path);
}

std::vector<PairwiseOrderLabel> LoadLabels(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ReadLabels(in, path);
}

LoadedRecords LoadJsonl(const std::string& path, RecordKind kind) {
  switch (kind) {
    case RecordKind::kGraph:
      return LoadGraphs(path);
    case RecordKind::kSequences:
      return LoadSequences(path);
    case RecordKind::kLabels:
      return LoadLabels(path);
  }
  throw ValidationError("unknown record kind");
}

void WriteGraphs(std::ostream& out, const Dataset& dataset) {
  for (const TaskGraph& graph : dataset.tasks) {
    Json record = ToJson(graph);
    if (dataset.split) {
      auto it = dataset.split->find(graph.task_id);
      if (it != dataset.split->end()) record["split"] = SplitName(it->second);
    }
    out << record.dump() << '\n';
  }
}

void WriteSequences(std::ostream& out, const std::vector<StepSequenceSet>& sets) {
  for (const StepSequenceSet& set : sets) out << ToJson(set).dump() << '\n';
}

void WriteLabels(std::ostream& out,
                 const std::vector<PairwiseOrderLabel>& labels) {
  for (const PairwiseOrderLabel& label : labels) out << ToJson(label).dump() << '\n';
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

DagCheck ValidateDag(const TaskGraph& graph) {
  const size_t n = graph.steps.size();
  std::vector<std::vector<int>> children(n);
  for (const auto& [from, to] : graph.IndexedEdges()) children[from].push_back(to);

  enum Color { kWhite, kGray, kBlack };
  std::vector<Color> color(n, kWhite);
  // Explicit stack of (node, next child position); it doubles as the
  // current DFS path.
  std::vector<std::pair<int, size_t>> stack;
  for (size_t root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    stack.emplace_back(static_cast<int>(root), 0);
    color[root] = kGray;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == children[node].size()) {
        color[node] = kBlack;
        stack.pop_back();
        continue;
      }
      const int child = children[node][next++];
      if (color[child] == kGray) {
        DagCheck result;
        result.acyclic = false;
        bool on_cycle = false;
        for (const auto& frame : stack) {
          on_cycle = on_cycle || frame.first == child;
          if (on_cycle) result.cycle.push_back(graph.steps[frame.first].id);
        }
        return result;
      }
      if (color[child] == kWhite) {
        color[child] = kGray;
        stack.emplace_back(child, 0);
      }
    }
  }
  return DagCheck{};
}

std::vector<std::vector<bool>> Reachability(const TaskGraph& graph) {
  const size_t n = graph.steps.size();
  std::vector<std::vector<int>> children(n);
  for (const auto& [from, to] : graph.IndexedEdges()) children[from].push_back(to);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (size_t s = 0; s < n; ++s) {
    std::vector<int> stack(children[s].begin(), children[s].end());
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = true;
      stack.insert(stack.end(), children[v].begin(), children[v].end());
    }
  }
  return reach;
}

DatasetStats ComputeStats(const Dataset& dataset) {
  DatasetStats stats;
  stats.tasks = dataset.tasks.size();
  for (const TaskGraph& graph : dataset.tasks) {
    stats.steps += graph.steps.size();
    stats.edges += graph.edges.size();
  }
  if (stats.tasks > 0) {
    stats.steps_per_task = static_cast<double>(stats.steps) / stats.tasks;
    stats.edges_per_task = static_cast<double>(stats.edges) / stats.tasks;
  }
  return stats;
}

}  // namespace taskgraph
