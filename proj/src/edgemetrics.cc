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

#include "taskgraph/edgemetrics.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "taskgraph/assign.h"
#include "taskgraph/nodemetrics.h"
#include "taskgraph/textnorm.h"
#include "util.h"

namespace taskgraph {
namespace {

struct Neighborhoods {
  std::vector<std::vector<std::string>> parents, children;
};

Neighborhoods CollectNeighborhoods(const TaskGraph& graph) {
  Neighborhoods out;
  out.parents.resize(graph.steps.size());
  out.children.resize(graph.steps.size());
  for (const auto& [from, to] : graph.IndexedEdges()) {
    out.children[from].push_back(graph.steps[to].text);
    out.parents[to].push_back(graph.steps[from].text);
  }
  for (auto& set : out.parents) std::sort(set.begin(), set.end());
  for (auto& set : out.children) std::sort(set.begin(), set.end());
  return out;
}

std::vector<std::string> Union(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  std::vector<std::string> out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string Render(std::vector<std::string> texts) {
  std::sort(texts.begin(), texts.end());
  std::string out;
  for (const std::string& text : texts) {
    if (!out.empty()) out.push_back(' ');
    out += text;
  }
  return out;
}

Json TripleJson(const RougeTriple& t) {
  return Json{{"rouge1", t.rouge1}, {"rouge2", t.rouge2}, {"rougeL", t.rougeL}};
}

Json ScoresJson(const EdgeScores& scores) {
  Json out = Json::object();
  for (EdgeFamily f : kEdgeFamilies) out[std::string(EdgeFamilyName(f))] = TripleJson(scores[f]);
  return out;
}

}  // namespace

std::vector<AlignedPair> AlignNodes(const TaskGraph& gold, const TaskGraph& pred,
                                    const SimilarityProvider& provider) {
  const Neighborhoods gold_nb = CollectNeighborhoods(gold);
  const Neighborhoods pred_nb = CollectNeighborhoods(pred);
  auto gold_side = [&](AlignedPair* pair, size_t g) {
    pair->gold_node = gold.steps[g];
    pair->gold_parents = gold_nb.parents[g];
    pair->gold_children = gold_nb.children[g];
  };
  auto pred_side = [&](AlignedPair* pair, size_t p) {
    pair->pred_node = pred.steps[p];
    pair->pred_parents = pred_nb.parents[p];
    pair->pred_children = pred_nb.children[p];
  };

  const SimMatrix m = BuildSimMatrix(pred.StepTexts(), gold.StepTexts(), provider);
  const Matching matching = Hungarian(m);
  std::vector<MatchedPair> by_gold = matching.pairs;
  std::sort(by_gold.begin(), by_gold.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.col < b.col; });

  std::vector<AlignedPair> pairs;
  for (const MatchedPair& match : by_gold) {
    AlignedPair pair;
    gold_side(&pair, match.col);
    pred_side(&pair, match.row);
    pairs.push_back(std::move(pair));
  }
  for (size_t g : matching.unmatched_cols) {
    AlignedPair pair;
    gold_side(&pair, g);
    pairs.push_back(std::move(pair));
  }
  for (size_t p : matching.unmatched_rows) {
    AlignedPair pair;
    pred_side(&pair, p);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string_view EdgeFamilyName(EdgeFamily family) {
  switch (family) {
    case EdgeFamily::kInDegree:
      return "in_degree";
    case EdgeFamily::kOutDegree:
      return "out_degree";
    case EdgeFamily::kStepProximity:
      return "step_proximity";
  }
  return "";
}

RougeTriple SetOverlap(const std::vector<std::string>& gold_set,
                       const std::vector<std::string>& pred_set) {
  if (gold_set.empty() && pred_set.empty()) return {1.0, 1.0, 1.0};
  if (gold_set.empty() || pred_set.empty()) return {0.0, 0.0, 0.0};
  const TokenStream reference = Tokenize(Render(gold_set));
  const TokenStream candidate = Tokenize(Render(pred_set));
  return {RougeN(reference, candidate, 1).f1, RougeN(reference, candidate, 2).f1,
          RougeL(reference, candidate).f1};
}

EdgeScores EvalEdges(const TaskGraph& gold, const TaskGraph& pred,
                     const SimilarityProvider& provider) {
  const std::vector<AlignedPair> pairs = AlignNodes(gold, pred, provider);
  EdgeScores scores;
  if (pairs.empty()) {
    // Two empty graphs agree on every (empty) neighborhood.
    for (EdgeFamily f : kEdgeFamilies) scores[f] = {1.0, 1.0, 1.0};
    return scores;
  }
  for (const AlignedPair& pair : pairs) {
    // A node without a counterpart agrees with nothing, even when both
    // neighborhoods are empty; otherwise isolated spurious steps would score.
    if (!pair.gold_node || !pair.pred_node) continue;
    const RougeTriple overlaps[] = {
        SetOverlap(pair.gold_parents, pair.pred_parents),
        SetOverlap(pair.gold_children, pair.pred_children),
        SetOverlap(Union(pair.gold_parents, pair.gold_children),
                   Union(pair.pred_parents, pair.pred_children))};
    for (size_t f = 0; f < kEdgeFamilies.size(); ++f) {
      scores.family[f].rouge1 += overlaps[f].rouge1;
      scores.family[f].rouge2 += overlaps[f].rouge2;
      scores.family[f].rougeL += overlaps[f].rougeL;
    }
  }
  const double n = static_cast<double>(pairs.size());
  for (RougeTriple& t : scores.family) {
    t.rouge1 /= n;
    t.rouge2 /= n;
    t.rougeL /= n;
  }
  return scores;
}

EdgeMetricsReport EvalEdgesCorpus(const Dataset& gold, const Dataset& preds,
                                  const SimilarityProvider& provider, int jobs) {
  CheckPredictionCoverage(gold, preds);
  const size_t n = gold.tasks.size();
  std::vector<EdgeScores> results(n);
  internal::ParallelFor(n, jobs, [&](size_t i) {
    const TaskGraph& g = gold.tasks[i];
    results[i] = EvalEdges(g, *preds.Find(g.task_id), provider);
  });
  EdgeMetricsReport report;
  for (size_t i = 0; i < n; ++i) report.per_task.emplace(gold.tasks[i].task_id, results[i]);
  if (n == 0) return report;
  for (const auto& [id, scores] : report.per_task) {
    for (size_t f = 0; f < kEdgeFamilies.size(); ++f) {
      report.corpus.family[f].rouge1 += scores.family[f].rouge1;
      report.corpus.family[f].rouge2 += scores.family[f].rouge2;
      report.corpus.family[f].rougeL += scores.family[f].rougeL;
    }
  }
  for (RougeTriple& t : report.corpus.family) {
    t.rouge1 /= n;
    t.rouge2 /= n;
    t.rougeL /= n;
  }
  return report;
}

Json EdgeReportToJson(const EdgeMetricsReport& report, bool include_per_task) {
  Json out;
  out["aggregation"] = "macro: per-task averages over aligned pairs, averaged over tasks";
  out["rouge_statistic"] = "f1";
  out["num_tasks"] = report.per_task.size();
  out["corpus"] = ScoresJson(report.corpus);
  if (include_per_task) {
    Json per_task = Json::object();
    for (const auto& [id, scores] : report.per_task) per_task[id] = ScoresJson(scores);
    out["per_task"] = std::move(per_task);
  }
  return out;
}

std::string EdgeReportToCsv(const EdgeMetricsReport& report) {
  using internal::FormatFixed;
  std::ostringstream out;
  out << "metric,rouge1,rouge2,rougeL\n";
  for (EdgeFamily f : kEdgeFamilies) {
    const RougeTriple& t = report.corpus[f];
    out << EdgeFamilyName(f) << ',' << FormatFixed(t.rouge1) << ',' << FormatFixed(t.rouge2)
        << ',' << FormatFixed(t.rougeL) << '\n';
  }
  return out.str();
}

namespace {

size_t CountAgreeing(const TaskGraph& gold, const std::vector<PairwiseOrderLabel>& labels) {
  const auto reach = Reachability(gold);
  size_t correct = 0;
  for (const PairwiseOrderLabel& label : labels) {
    if (label.task_id != gold.task_id) {
      throw ValidationError("label for task '" + label.task_id + "' evaluated against task '" +
                            gold.task_id + "'");
    }
    const int a = gold.IndexOf(label.step_a);
    const int b = gold.IndexOf(label.step_b);
    for (const auto& [index, id] : {std::pair{a, &label.step_a}, std::pair{b, &label.step_b}}) {
      if (index < 0) {
        throw ValidationError("task '" + gold.task_id + "': label references unknown step '" +
                              *id + "'");
      }
    }
    const bool before = reach[a][b];
    if (before == (label.label == OrderLabel::kBefore)) ++correct;
  }
  return correct;
}

}  // namespace

double EvalPairwiseLabels(const TaskGraph& gold, const std::vector<PairwiseOrderLabel>& labels) {
  if (labels.empty()) return 0.0;
  return static_cast<double>(CountAgreeing(gold, labels)) / labels.size();
}

double EvalPairwiseLabels(const Dataset& gold, const std::vector<PairwiseOrderLabel>& labels) {
  if (labels.empty()) return 0.0;
  std::map<std::string, std::vector<PairwiseOrderLabel>> by_task;
  for (const PairwiseOrderLabel& label : labels) by_task[label.task_id].push_back(label);
  size_t correct = 0;
  for (const auto& [task_id, task_labels] : by_task) {
    const TaskGraph* graph = gold.Find(task_id);
    if (graph == nullptr) throw ValidationError("label references unknown task '" + task_id + "'");
    correct += CountAgreeing(*graph, task_labels);
  }
  return static_cast<double>(correct) / labels.size();
}

std::vector<PairwiseOrderLabel> GoldPairwiseLabels(const Dataset& gold) {
  std::vector<PairwiseOrderLabel> labels;
  for (const TaskGraph& graph : gold.tasks) {
    const auto reach = Reachability(graph);
    for (size_t a = 0; a < graph.steps.size(); ++a) {
      for (size_t b = 0; b < graph.steps.size(); ++b) {
        if (a == b) continue;
        labels.push_back({graph.task_id, graph.steps[a].id, graph.steps[b].id,
                          reach[a][b] ? OrderLabel::kBefore : OrderLabel::kNotBefore});
      }
    }
  }
  return labels;
}

}  // namespace taskgraph
