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

#include "taskgraph/nodemetrics.h"

#include <set>
#include <sstream>

#include "util.h"

namespace taskgraph {
namespace {

std::string JoinSteps(const std::vector<std::string>& texts) {
  std::string out;
  for (const std::string& text : texts) {
    if (!out.empty()) out.push_back(' ');
    out += text;
  }
  return out;
}

Json ScoreJson(const RougeScore& s) {
  return Json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"f2", s.f2}};
}

Json ScoresJson(const NodeScores& scores) {
  Json out = Json::object();
  for (NodeFamily f : kNodeFamilies) out[std::string(NodeFamilyName(f))] = ScoreJson(scores[f]);
  return out;
}

}  // namespace

std::string_view NodeFamilyName(NodeFamily family) {
  switch (family) {
    case NodeFamily::kRouge1:
      return "rouge1";
    case NodeFamily::kRouge2:
      return "rouge2";
    case NodeFamily::kRougeL:
      return "rougeL";
    case NodeFamily::kLegacy:
      return "legacy";
    case NodeFamily::kHungarian:
      return "hungarian";
    case NodeFamily::kRelaxedHungarian:
      return "relaxed_hungarian";
  }
  return "";
}

SimMatrix BuildSimMatrix(const std::vector<std::string>& pred,
                         const std::vector<std::string>& gold,
                         const SimilarityProvider& provider) {
  SimMatrix m(pred.size(), gold.size());
  for (size_t r = 0; r < pred.size(); ++r) {
    for (size_t c = 0; c < gold.size(); ++c) m.Set(r, c, provider(pred[r], gold[c]));
  }
  return m;
}

NodeScores EvalNodes(const TaskGraph& gold, const TaskGraph& pred,
                     const SimilarityProvider& provider,
                     std::vector<std::string>* warnings) {
  if (gold.task_id != pred.task_id) {
    throw ValidationError("task id mismatch: gold '" + gold.task_id + "' vs prediction '" +
                          pred.task_id + "'");
  }
  NodeScores scores;
  if (pred.steps.empty()) {
    if (warnings != nullptr) {
      warnings->push_back("task '" + pred.task_id + "': prediction has no steps, scored 0");
    }
    return scores;
  }
  const std::vector<std::string> gold_texts = gold.StepTexts();
  const std::vector<std::string> pred_texts = pred.StepTexts();

  const TokenStream reference = Tokenize(JoinSteps(gold_texts));
  const TokenStream candidate = Tokenize(JoinSteps(pred_texts));
  scores[NodeFamily::kRouge1] = RougeN(reference, candidate, 1);
  scores[NodeFamily::kRouge2] = RougeN(reference, candidate, 2);
  scores[NodeFamily::kRougeL] = RougeL(reference, candidate);

  const SimMatrix m = BuildSimMatrix(pred_texts, gold_texts, provider);
  const PrecisionRecall legacy = LegacyScores(m);
  const PrecisionRecall hungarian = HungarianScores(m);
  const PrecisionRecall relaxed = RelaxedScores(m);
  scores[NodeFamily::kLegacy] = MakeRougeScore(legacy.precision, legacy.recall);
  scores[NodeFamily::kHungarian] = MakeRougeScore(hungarian.precision, hungarian.recall);
  scores[NodeFamily::kRelaxedHungarian] = MakeRougeScore(relaxed.precision, relaxed.recall);
  return scores;
}

void CheckPredictionCoverage(const Dataset& gold, const Dataset& preds) {
  std::set<std::string> gold_ids, pred_ids;
  for (const TaskGraph& g : gold.tasks) gold_ids.insert(g.task_id);
  for (const TaskGraph& p : preds.tasks) pred_ids.insert(p.task_id);
  std::string missing, extra;
  for (const std::string& id : gold_ids) {
    if (!pred_ids.count(id)) missing += (missing.empty() ? "" : ", ") + id;
  }
  for (const std::string& id : pred_ids) {
    if (!gold_ids.count(id)) extra += (extra.empty() ? "" : ", ") + id;
  }
  if (missing.empty() && extra.empty()) return;
  std::string message;
  if (!missing.empty()) message += "missing predictions for tasks: " + missing;
  if (!extra.empty()) {
    message += (message.empty() ? "" : "; ") + std::string("predictions for unknown tasks: ") + extra;
  }
  throw ValidationError(message);
}

NodeMetricsReport EvalCorpus(const Dataset& gold, const Dataset& preds,
                             const SimilarityProvider& provider, int jobs) {
  CheckPredictionCoverage(gold, preds);
  const size_t n = gold.tasks.size();
  std::vector<NodeScores> results(n);
  std::vector<std::vector<std::string>> task_warnings(n);
  internal::ParallelFor(n, jobs, [&](size_t i) {
    const TaskGraph& g = gold.tasks[i];
    results[i] = EvalNodes(g, *preds.Find(g.task_id), provider, &task_warnings[i]);
  });

  NodeMetricsReport report;
  for (size_t i = 0; i < n; ++i) {
    report.per_task.emplace(gold.tasks[i].task_id, results[i]);
  }
  // Warnings follow task-id order so the report does not depend on input order.
  std::map<std::string, const std::vector<std::string>*> by_id;
  for (size_t i = 0; i < n; ++i) by_id[gold.tasks[i].task_id] = &task_warnings[i];
  for (const auto& [id, warnings] : by_id) {
    report.warnings.insert(report.warnings.end(), warnings->begin(), warnings->end());
  }
  if (n == 0) return report;

  for (NodeFamily f : kNodeFamilies) {
    double p = 0.0, r = 0.0, f1 = 0.0, f2 = 0.0;
    for (const auto& [id, scores] : report.per_task) {
      p += scores[f].precision;
      r += scores[f].recall;
      f1 += scores[f].f1;
      f2 += scores[f].f2;
    }
    report.corpus[f] = MakeRougeScore(p / n, r / n);
    report.corpus_mean_f[f] = RougeScore{p / n, r / n, f1 / n, f2 / n};
  }
  return report;
}

Json NodeReportToJson(const NodeMetricsReport& report, const ReportOptions& options) {
  Json out;
  out["aggregation"] = "macro: per-task precision and recall averaged, F recomputed";
  out["num_tasks"] = report.per_task.size();
  out["corpus"] = ScoresJson(report.corpus);
  if (options.include_mean_f) {
    Json mean_f = Json::object();
    for (NodeFamily f : kNodeFamilies) {
      mean_f[std::string(NodeFamilyName(f))] = {{"f1", report.corpus_mean_f[f].f1},
                                                {"f2", report.corpus_mean_f[f].f2}};
    }
    out["corpus_mean_f"] = std::move(mean_f);
  }
  if (options.include_per_task) {
    Json per_task = Json::object();
    for (const auto& [id, scores] : report.per_task) per_task[id] = ScoresJson(scores);
    out["per_task"] = std::move(per_task);
  }
  out["warnings"] = report.warnings;
  return out;
}

std::string NodeReportToCsv(const NodeMetricsReport& report, const ReportOptions& options) {
  using internal::FormatFixed;
  std::ostringstream out;
  out << "metric,precision,recall,f1,f2";
  if (options.include_mean_f) out << ",f1_mean,f2_mean";
  out << '\n';
  for (NodeFamily f : kNodeFamilies) {
    const RougeScore& s = report.corpus[f];
    out << NodeFamilyName(f) << ',' << FormatFixed(s.precision) << ',' << FormatFixed(s.recall)
        << ',' << FormatFixed(s.f1) << ',' << FormatFixed(s.f2);
    if (options.include_mean_f) {
      out << ',' << FormatFixed(report.corpus_mean_f[f].f1) << ','
          << FormatFixed(report.corpus_mean_f[f].f2);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace taskgraph
