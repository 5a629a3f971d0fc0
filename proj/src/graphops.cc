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

#include "taskgraph/graphops.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "taskgraph/assign.h"
#include "taskgraph/nodemetrics.h"
#include "taskgraph/textnorm.h"

namespace taskgraph {
namespace {

TaskGraph WithEdges(const TaskGraph& graph, const std::vector<std::pair<int, int>>& edges) {
  TaskGraph out = graph;
  out.edges.clear();
  for (const auto& [a, b] : edges) out.edges.emplace_back(graph.steps[a].id, graph.steps[b].id);
  return out;
}

void CopyMetadata(const StepSequenceSet& set, TaskGraph* graph) {
  graph->task_id = set.task_id;
  graph->task = set.task;
  graph->context = set.context;
}

}  // namespace

TaskGraph LinearGraph(const std::vector<std::string>& steps) {
  if (steps.empty()) throw ValidationError("linear graph needs at least one step");
  std::set<std::string> seen;
  for (const std::string& text : steps) {
    if (!seen.insert(NormalizeText(text)).second) {
      throw ValidationError("duplicate step '" + text + "' in linear sequence");
    }
  }
  TaskGraph graph = GraphFromTexts(steps);
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    graph.edges.emplace_back(graph.steps[i].id, graph.steps[i + 1].id);
  }
  return graph;
}

AggregateOutput ParseAggregateOutput(std::string_view name) {
  if (name == "reduction") return AggregateOutput::kReduction;
  if (name == "closure") return AggregateOutput::kClosure;
  throw ValidationError("unknown output mode '" + std::string(name) +
                        "' (expected reduction or closure)");
}

TaskGraph AggregateSequences(const StepSequenceSet& set, AggregateOutput output) {
  std::unordered_map<std::string, int> index;
  std::vector<std::string> texts;
  std::vector<std::vector<int>> positions;  // per sequence, node index by position
  for (const auto& sequence : set.sequences) {
    std::vector<int> nodes;
    for (const std::string& text : sequence) {
      auto [it, inserted] = index.emplace(NormalizeText(text), static_cast<int>(texts.size()));
      if (inserted) texts.push_back(text);
      nodes.push_back(it->second);
    }
    positions.push_back(std::move(nodes));
  }
  const size_t n = texts.size();
  // together[a][b]: sequences containing both; first[a][b]: those with a first.
  std::vector<std::vector<int>> together(n, std::vector<int>(n, 0));
  std::vector<std::vector<int>> first(n, std::vector<int>(n, 0));
  for (const auto& nodes : positions) {
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (size_t j = i + 1; j < nodes.size(); ++j) {
        ++together[nodes[i]][nodes[j]];
        ++together[nodes[j]][nodes[i]];
        ++first[nodes[i]][nodes[j]];
      }
    }
  }
  TaskGraph graph = GraphFromTexts(texts);
  CopyMetadata(set, &graph);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a != b && together[a][b] > 0 && first[a][b] == together[a][b]) {
        graph.edges.emplace_back(graph.steps[a].id, graph.steps[b].id);
      }
    }
  }
  graph = Decycle(graph);
  return output == AggregateOutput::kClosure ? TransitiveClosure(graph)
                                             : TransitiveReduction(graph);
}

TaskGraph TransitiveClosure(const TaskGraph& dag) {
  const auto reach = Reachability(dag);
  std::vector<std::pair<int, int>> edges;
  for (size_t a = 0; a < reach.size(); ++a) {
    for (size_t b = 0; b < reach.size(); ++b) {
      if (a != b && reach[a][b]) edges.emplace_back(a, b);
    }
  }
  return WithEdges(dag, edges);
}

TaskGraph TransitiveReduction(const TaskGraph& dag) {
  const auto reach = Reachability(dag);
  const size_t n = reach.size();
  std::vector<std::pair<int, int>> edges;
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a == b || !reach[a][b]) continue;
      bool implied = false;
      for (size_t c = 0; c < n && !implied; ++c) {
        implied = c != a && c != b && reach[a][c] && reach[c][b];
      }
      if (!implied) edges.emplace_back(a, b);
    }
  }
  return WithEdges(dag, edges);
}

std::vector<std::vector<int>> StronglyConnectedComponents(const TaskGraph& graph) {
  const int n = static_cast<int>(graph.steps.size());
  std::vector<std::vector<int>> children(n);
  for (const auto& [from, to] : graph.IndexedEdges()) children[from].push_back(to);

  // Iterative Tarjan.
  std::vector<int> order(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, size_t>> call;
  int counter = 0, components = 0;
  for (int root = 0; root < n; ++root) {
    if (order[root] >= 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto [v, next] = call.back();
      if (next == 0) {
        order[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (next < children[v].size()) {
        call.back().second = next + 1;
        const int w = children[v][next];
        if (order[w] < 0) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  std::vector<std::vector<int>> out(components);
  for (int v = 0; v < n; ++v) out[comp[v]].push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

TaskGraph Decycle(const TaskGraph& graph) {
  const auto components = StronglyConnectedComponents(graph);
  std::vector<int> comp(graph.steps.size());
  std::vector<size_t> size(components.size());
  for (size_t c = 0; c < components.size(); ++c) {
    size[c] = components[c].size();
    for (int v : components[c]) comp[v] = static_cast<int>(c);
  }
  std::vector<std::pair<int, int>> kept;
  for (const auto& [a, b] : graph.IndexedEdges()) {
    if (comp[a] != comp[b] || size[comp[a]] < 2) kept.emplace_back(a, b);
  }
  return WithEdges(graph, kept);
}

TaskGraph LabelsToGraph(const std::vector<Step>& steps,
                        const std::vector<PairwiseOrderLabel>& labels) {
  TaskGraph graph;
  graph.steps = steps;
  if (!labels.empty()) graph.task_id = labels.front().task_id;
  std::map<std::pair<std::string, std::string>, OrderLabel> seen;
  for (const PairwiseOrderLabel& label : labels) {
    for (const std::string* id : {&label.step_a, &label.step_b}) {
      if (graph.IndexOf(*id) < 0) {
        throw ValidationError("task '" + label.task_id + "': label references unknown step '" +
                              *id + "'");
      }
    }
    auto [it, inserted] = seen.emplace(std::pair{label.step_a, label.step_b}, label.label);
    if (!inserted && it->second != label.label) {
      throw ValidationError("task '" + label.task_id + "': contradictory labels for (" +
                            label.step_a + ", " + label.step_b + ")");
    }
    if (inserted && label.label == OrderLabel::kBefore) {
      graph.edges.emplace_back(label.step_a, label.step_b);
    }
  }
  return Decycle(graph);
}

std::vector<std::string> DedupMerge(const StepSequenceSet& set, const SimilarityProvider& provider,
                                    double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("dedup threshold must be in [0,1]");
  }
  std::vector<std::string> kept;
  for (const auto& sequence : set.sequences) {
    for (const std::string& step : sequence) {
      const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const std::string& k) {
        return provider(step, k) > threshold;
      });
      if (!duplicate) kept.push_back(step);
    }
  }
  return kept;
}

ThresholdFit FitDedupThreshold(const std::vector<std::pair<double, bool>>& scored) {
  if (scored.empty()) throw ValidationError("threshold fitting needs at least one labeled pair");
  std::vector<double> values;
  for (const auto& [sim, dup] : scored) values.push_back(sim);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> candidates = {0.0};
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    candidates.push_back((values[i] + values[i + 1]) / 2.0);
  }
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());

  ThresholdFit best{0.0, -1.0};
  for (double t : candidates) {
    size_t correct = 0;
    for (const auto& [sim, dup] : scored) correct += (sim > t) == dup;
    const double accuracy = static_cast<double>(correct) / scored.size();
    if (accuracy > best.accuracy) best = {t, accuracy};
  }
  return best;
}

ThresholdFit FitDedupThreshold(const std::vector<LabeledPair>& pairs,
                               const SimilarityProvider& provider) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(pairs.size());
  for (const LabeledPair& pair : pairs) scored.emplace_back(provider(pair.a, pair.b), pair.duplicate);
  return FitDedupThreshold(scored);
}

ScoredSequence ScoredSequenceFromJson(const Json& record) {
  if (!record.is_object() || !record.contains("task_id") || !record["task_id"].is_string()) {
    throw ValidationError("missing string field 'task_id'");
  }
  ScoredSequence out;
  out.task_id = record["task_id"].get<std::string>();
  const std::string where = "task '" + out.task_id + "': ";
  if (!record.contains("steps") || !record["steps"].is_array()) {
    throw ValidationError(where + "field 'steps' must be an array");
  }
  for (const Json& step : record["steps"]) {
    if (!step.is_string()) throw ValidationError(where + "steps must be strings");
    out.steps.push_back(step.get<std::string>());
  }
  if (out.steps.empty()) throw ValidationError(where + "empty step sequence");
  if (!record.contains("score") || !record["score"].is_number()) {
    throw ValidationError(where + "field 'score' must be a number");
  }
  out.score = record["score"].get<double>();
  return out;
}

Json ToJson(const ScoredSequence& sequence) {
  return Json{{"task_id", sequence.task_id}, {"steps", sequence.steps}, {"score", sequence.score}};
}

std::vector<ScoredSequence> ReadScoredSequences(std::istream& in, const std::string& source) {
  std::vector<ScoredSequence> out;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_number) + ": ";
    try {
      out.push_back(ScoredSequenceFromJson(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw ValidationError(where + "malformed JSON: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

std::vector<ScoredSequence> LoadScoredSequences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return ReadScoredSequences(in, path);
}

void WriteScoredSequences(std::ostream& out, const std::vector<ScoredSequence>& sequences) {
  for (const ScoredSequence& s : sequences) out << ToJson(s).dump() << '\n';
}

std::vector<ScoredSequence> BuildSfTrainingSet(const Dataset& gold,
                                               const std::vector<StepSequenceSet>& candidates,
                                               const SimilarityProvider& provider) {
  std::vector<ScoredSequence> out;
  for (const StepSequenceSet& set : candidates) {
    const TaskGraph* graph = gold.Find(set.task_id);
    if (graph == nullptr) {
      throw ValidationError("candidate sequences for unknown task '" + set.task_id + "'");
    }
    const std::vector<std::string> gold_steps = graph->StepTexts();
    for (const auto& sequence : set.sequences) {
      const PrecisionRecall pr = HungarianScores(BuildSimMatrix(sequence, gold_steps, provider));
      out.push_back({set.task_id, sequence, FBeta(pr.precision, pr.recall, 1.0)});
    }
  }
  return out;
}

std::vector<std::vector<std::string>> SwapCandidates(const std::vector<std::string>& steps,
                                                     size_t limit) {
  std::vector<std::vector<std::string>> out;
  for (size_t i = 0; i < steps.size() && out.size() < limit; ++i) {
    for (size_t j = i + 1; j < steps.size() && out.size() < limit; ++j) {
      std::vector<std::string> swapped = steps;
      std::swap(swapped[i], swapped[j]);
      out.push_back(std::move(swapped));
    }
  }
  return out;
}

std::vector<ScoredSequence> SelectTopSequences(std::vector<ScoredSequence> scored,
                                               double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ValidationError("keep fraction must be in (0,1]");
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredSequence& a, const ScoredSequence& b) { return a.score > b.score; });
  // The epsilon keeps products such as 0.3 * 10 from rounding up to 4.
  const auto keep = static_cast<size_t>(std::ceil(keep_fraction * scored.size() - 1e-9));
  scored.resize(std::min(keep, scored.size()));
  return scored;
}

}  // namespace taskgraph
