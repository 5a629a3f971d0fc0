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

#include "taskgraph/cli.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "taskgraph/core.h"
#include "taskgraph/dataops.h"
#include "taskgraph/edgemetrics.h"
#include "taskgraph/graphops.h"
#include "taskgraph/nodemetrics.h"
#include "taskgraph/sim.h"
#include "taskgraph/tasklama.h"
#include "util.h"

namespace taskgraph {
namespace {

namespace fs = std::filesystem;
using internal::FormatFixed;

struct Options {
  // Shared.
  std::string in, out, gold, pred, labels, candidates, pairs, tasks;
  std::string format = "json";
  std::string sim = "token";
  std::string embeddings;
  std::string embeddings_format = "step_jsonl";
  std::string word_vectors;
  std::string word_vectors_format = "word_text";
  std::string stopwords;
  int jobs = 1;
  unsigned long long seed = kDefaultSeed;
  // Subcommand specific.
  std::string output_mode = "reduction";
  double threshold = 0.9;
  double link_threshold = 0.5;
  std::vector<double> fractions = {0.6, 0.1, 0.3};
  size_t limit = 128;
  double keep_fraction = 0.5;
  size_t m = 5;
  size_t k = 20;
  std::vector<size_t> m_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<size_t> k_values = {20};
  std::string baseline = "repeat-task";
  bool mean_f = false;
  bool per_task = true;
  bool include_original = false;
  bool as_sequences = false;
  bool require_dag = false;
};

class Runner {
 public:
  Runner(const Options& options, std::ostream& out, std::ostream& err)
      : opt_(options), out_(out), err_(err) {}

  // Every path is checked before any work starts.
  void CheckInputs(std::initializer_list<const std::string*> paths) const {
    for (const std::string* path : paths) {
      if (path->empty()) continue;
      std::error_code ec;
      if (!fs::exists(*path, ec)) throw IoError(*path + ": no such file or directory");
    }
    if (!opt_.out.empty()) {
      const fs::path parent = fs::path(opt_.out).parent_path();
      std::error_code ec;
      if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw IoError(opt_.out + ": output directory does not exist");
      }
    }
  }

  void Emit(const std::string& report, const std::string& summary) const {
    if (opt_.out.empty()) {
      out_ << report;
    } else {
      WriteFile(opt_.out, report);
      out_ << summary;
    }
  }

  void Warn(const std::vector<std::string>& warnings) const {
    for (const std::string& w : warnings) err_ << "warning: " << w << '\n';
  }

  SimilarityProvider Provider() const {
    switch (ParseSimilarityKind(opt_.sim)) {
      case SimilarityKind::kToken:
        return SimilarityProvider::Token();
      case SimilarityKind::kExact:
        return SimilarityProvider::Exact();
      case SimilarityKind::kEmbedding:
        break;
    }
    if (opt_.embeddings.empty()) throw ValidationError("--sim embedding needs --embeddings");
    return SimilarityProvider::Embedding(
        Store(opt_.embeddings, ParseEmbeddingFormat(opt_.embeddings_format)));
  }

  std::shared_ptr<const EmbeddingStore> Store(const std::string& path,
                                              EmbeddingFormat format) const {
    std::vector<std::string> warnings;
    auto store = std::make_shared<const EmbeddingStore>(LoadEmbeddings(path, format, &warnings));
    Warn(warnings);
    return store;
  }

  void CheckFormat() const {
    if (opt_.format != "json" && opt_.format != "csv") {
      throw ValidationError("--format must be json or csv");
    }
  }

  int EvalNodesCmd() const {
    CheckFormat();
    CheckInputs({&opt_.gold, &opt_.pred, &opt_.embeddings});
    const Dataset gold = LoadGraphs(opt_.gold);
    const Dataset pred = LoadGraphs(opt_.pred);
    const NodeMetricsReport report = EvalCorpus(gold, pred, Provider(), opt_.jobs);
    Warn(report.warnings);
    ReportOptions options;
    options.include_mean_f = opt_.mean_f;
    options.include_per_task = opt_.per_task;
    const std::string body = opt_.format == "csv" ? NodeReportToCsv(report, options)
                                                  : NodeReportToJson(report, options).dump(2) + "\n";
    std::ostringstream summary;
    summary << "evaluated " << report.per_task.size() << " tasks (macro average)\n";
    for (NodeFamily f : kNodeFamilies) {
      const RougeScore& s = report.corpus[f];
      summary << NodeFamilyName(f) << ": P=" << FormatFixed(s.precision, 4)
              << " R=" << FormatFixed(s.recall, 4) << " F1=" << FormatFixed(s.f1, 4)
              << " F2=" << FormatFixed(s.f2, 4) << '\n';
    }
    Emit(body, summary.str());
    return kExitOk;
  }

  int EvalEdgesCmd() const {
    CheckFormat();
    CheckInputs({&opt_.gold, &opt_.pred, &opt_.embeddings});
    const Dataset gold = LoadGraphs(opt_.gold);
    const Dataset pred = LoadGraphs(opt_.pred);
    const EdgeMetricsReport report = EvalEdgesCorpus(gold, pred, Provider(), opt_.jobs);
    const std::string body = opt_.format == "csv"
                                 ? EdgeReportToCsv(report)
                                 : EdgeReportToJson(report, opt_.per_task).dump(2) + "\n";
    std::ostringstream summary;
    summary << "evaluated " << report.per_task.size() << " tasks (Rouge F1)\n";
    for (EdgeFamily f : kEdgeFamilies) {
      const RougeTriple& t = report.corpus[f];
      summary << EdgeFamilyName(f) << ": R1=" << FormatFixed(t.rouge1, 4)
              << " R2=" << FormatFixed(t.rouge2, 4) << " RL=" << FormatFixed(t.rougeL, 4) << '\n';
    }
    Emit(body, summary.str());
    return kExitOk;
  }

  int EvalPairwiseCmd() const {
    CheckFormat();
    CheckInputs({&opt_.gold, &opt_.labels});
    const Dataset gold = LoadGraphs(opt_.gold);
    const auto labels = LoadLabels(opt_.labels);
    const double accuracy = EvalPairwiseLabels(gold, labels);
    const auto probes = GoldPairwiseLabels(gold);
    size_t not_before = 0;
    for (const auto& probe : probes) not_before += probe.label == OrderLabel::kNotBefore;
    const double majority = probes.empty() ? 0.0 : static_cast<double>(not_before) / probes.size();
    std::string body;
    if (opt_.format == "csv") {
      body = "metric,value\naccuracy," + FormatFixed(accuracy) + "\nnum_labels," +
             std::to_string(labels.size()) + "\nmajority_class_accuracy," +
             FormatFixed(majority) + "\n";
    } else {
      body = Json{{"accuracy", accuracy},
                  {"num_labels", labels.size()},
                  {"majority_class_accuracy", majority},
                  {"num_gold_pairs", probes.size()}}
                 .dump(2) +
             "\n";
    }
    Emit(body, "accuracy " + FormatFixed(accuracy, 4) + " over " + std::to_string(labels.size()) +
                   " labels (all not_before: " + FormatFixed(majority, 4) + ")\n");
    return kExitOk;
  }

  int GraphFromSequencesCmd() const {
    CheckInputs({&opt_.in});
    const AggregateOutput mode = ParseAggregateOutput(opt_.output_mode);
    Dataset dataset;
    for (const StepSequenceSet& set : LoadSequences(opt_.in)) {
      dataset.tasks.push_back(AggregateSequences(set, mode));
    }
    return EmitGraphs(dataset, "built");
  }

  int GraphLinearCmd() const {
    CheckInputs({&opt_.in});
    Dataset dataset;
    for (const StepSequenceSet& set : LoadSequences(opt_.in)) {
      if (set.sequences.size() > 1) {
        err_ << "warning: task '" << set.task_id << "': using the first of "
             << set.sequences.size() << " sequences\n";
      }
      TaskGraph graph = LinearGraph(set.sequences.front());
      graph.task_id = set.task_id;
      graph.task = set.task;
      graph.context = set.context;
      dataset.tasks.push_back(std::move(graph));
    }
    return EmitGraphs(dataset, "built");
  }

  int DecycleCmd() const {
    CheckInputs({&opt_.in, &opt_.labels});
    Dataset input = LoadGraphs(opt_.in);
    std::map<std::string, std::vector<PairwiseOrderLabel>> by_task;
    const bool from_labels = !opt_.labels.empty();
    if (from_labels) {
      for (auto& label : LoadLabels(opt_.labels)) {
        if (input.Find(label.task_id) == nullptr) {
          throw ValidationError("label references unknown task '" + label.task_id + "'");
        }
        by_task[label.task_id].push_back(std::move(label));
      }
    }
    size_t removed = 0;
    Dataset output;
    output.split = input.split;
    for (const TaskGraph& graph : input.tasks) {
      TaskGraph result;
      if (from_labels) {
        result = LabelsToGraph(graph.steps, by_task[graph.task_id]);
        result.task_id = graph.task_id;
        result.task = graph.task;
        result.context = graph.context;
        result.extra = graph.extra;
      } else {
        result = Decycle(graph);
        removed += graph.edges.size() - result.edges.size();
      }
      output.tasks.push_back(std::move(result));
    }
    const std::string verb = from_labels ? "built from labels"
                                         : "decycled (" + std::to_string(removed) + " edges removed)";
    return EmitGraphs(output, verb);
  }

  int MergeSequencesCmd() const {
    CheckInputs({&opt_.in, &opt_.embeddings});
    const SimilarityProvider provider = Provider();
    std::vector<StepSequenceSet> merged;
    for (StepSequenceSet set : LoadSequences(opt_.in)) {
      std::vector<std::string> steps = DedupMerge(set, provider, opt_.threshold);
      set.sequences = {std::move(steps)};
      merged.push_back(std::move(set));
    }
    std::ostringstream body;
    WriteSequences(body, merged);
    Emit(body.str(), "merged " + std::to_string(merged.size()) + " sequence sets\n");
    return kExitOk;
  }

  int FitThresholdCmd() const {
    CheckInputs({&opt_.pairs, &opt_.embeddings});
    std::vector<LabeledPair> pairs;
    std::ifstream in(opt_.pairs);
    if (!in) throw IoError(opt_.pairs + ": cannot open for reading");
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = opt_.pairs + ":" + std::to_string(line_number) + ": ";
      Json record;
      try {
        record = Json::parse(line);
      } catch (const Json::parse_error& e) {
        throw ValidationError(where + "malformed JSON: " + e.what());
      }
      if (!record.is_object() || !record.value("a", Json()).is_string() ||
          !record.value("b", Json()).is_string() || !record.value("label", Json()).is_string()) {
        throw ValidationError(where + "expected {\"a\": text, \"b\": text, \"label\": dup|distinct}");
      }
      const std::string label = record["label"].get<std::string>();
      if (label != "dup" && label != "distinct") {
        throw ValidationError(where + "label must be dup or distinct");
      }
      pairs.push_back({record["a"].get<std::string>(), record["b"].get<std::string>(), label == "dup"});
    }
    const ThresholdFit fit = FitDedupThreshold(pairs, Provider());
    const std::string body =
        Json{{"threshold", fit.threshold}, {"accuracy", fit.accuracy}, {"num_pairs", pairs.size()}}
            .dump(2) +
        "\n";
    Emit(body, "threshold " + FormatFixed(fit.threshold) + " accuracy " +
                   FormatFixed(fit.accuracy, 4) + "\n");
    return kExitOk;
  }

  int SfDatasetCmd() const {
    CheckInputs({&opt_.gold, &opt_.candidates, &opt_.embeddings});
    const Dataset gold = LoadGraphs(opt_.gold);
    const auto scored = BuildSfTrainingSet(gold, LoadSequences(opt_.candidates), Provider());
    std::ostringstream body;
    WriteScoredSequences(body, scored);
    Emit(body.str(), "scored " + std::to_string(scored.size()) + " sequences\n");
    return kExitOk;
  }

  int SwapCandidatesCmd() const {
    CheckInputs({&opt_.in});
    if (opt_.limit == 0) throw ValidationError("--limit must be at least 1");
    std::vector<StepSequenceSet> out;
    for (StepSequenceSet set : LoadSequences(opt_.in)) {
      const std::vector<std::string> original = set.sequences.front();
      auto swaps = SwapCandidates(original, opt_.limit);
      if (opt_.include_original) swaps.insert(swaps.begin(), original);
      if (swaps.empty()) {
        err_ << "note: task '" << set.task_id << "' has a single step, no swap candidates\n";
        continue;
      }
      set.sequences = std::move(swaps);
      out.push_back(std::move(set));
    }
    std::ostringstream body;
    WriteSequences(body, out);
    Emit(body.str(), "wrote candidates for " + std::to_string(out.size()) + " tasks\n");
    return kExitOk;
  }

  int SelectTopCmd() const {
    CheckInputs({&opt_.in, &opt_.tasks});
    std::vector<std::string> order;
    std::map<std::string, std::vector<ScoredSequence>> by_task;
    for (ScoredSequence& s : LoadScoredSequences(opt_.in)) {
      if (!by_task.count(s.task_id)) order.push_back(s.task_id);
      by_task[s.task_id].push_back(std::move(s));
    }
    Dataset task_text;
    if (!opt_.tasks.empty()) task_text = LoadGraphs(opt_.tasks);
    std::ostringstream body;
    size_t kept = 0;
    for (const std::string& id : order) {
      const auto top = SelectTopSequences(by_task[id], opt_.keep_fraction);
      kept += top.size();
      if (!opt_.as_sequences) {
        WriteScoredSequences(body, top);
        continue;
      }
      StepSequenceSet set;
      set.task_id = id;
      const TaskGraph* graph = task_text.Find(id);
      set.task = graph != nullptr ? graph->task : id;
      if (graph != nullptr) set.context = graph->context;
      for (const ScoredSequence& s : top) set.sequences.push_back(s.steps);
      ValidateSequenceSet(set);
      body << ToJson(set).dump() << '\n';
    }
    Emit(body.str(), "kept " + std::to_string(kept) + " sequences over " +
                         std::to_string(order.size()) + " tasks\n");
    return kExitOk;
  }

  int SplitDatasetCmd() const {
    CheckInputs({&opt_.in, &opt_.embeddings});
    if (opt_.fractions.size() != 3) throw ValidationError("--fractions needs train,validation,test");
    const Dataset dataset = LoadGraphs(opt_.in);
    const ClusterAssignment assignment =
        ClusterSplit(dataset, Provider(), opt_.link_threshold,
                     {opt_.fractions[0], opt_.fractions[1], opt_.fractions[2]}, opt_.seed);
    std::ostringstream body;
    WriteClusterAssignment(body, dataset, assignment);
    std::map<Split, size_t> counts;
    for (const TaskGraph& g : dataset.tasks) ++counts[assignment.SplitOf(g.task_id)];
    std::ostringstream summary;
    summary << assignment.cluster_split.size() << " clusters; train " << counts[Split::kTrain]
            << ", validation " << counts[Split::kValidation] << ", test " << counts[Split::kTest]
            << '\n';
    Emit(body.str(), summary.str());
    return kExitOk;
  }

  std::set<std::string> Stopwords() const {
    return opt_.stopwords.empty() ? DefaultStopwords() : LoadStopwords(opt_.stopwords);
  }

  TaskGraph Baseline(const TaskGraph& source, size_t index, size_t m, size_t k,
                     const EmbeddingStore* store, const std::set<std::string>& stopwords,
                     std::vector<std::string>* warnings) const {
    TaskGraph graph;
    if (store == nullptr) {
      graph = RepeatTaskBaseline(source.task, m);
    } else {
      RepeatSimilarOptions options;
      options.m = m;
      options.k = k;
      options.seed = opt_.seed ^ static_cast<unsigned long long>(index);
      graph = RepeatSimilarBaseline(source.task, *store, stopwords, options, warnings);
    }
    graph.task_id = source.task_id;
    graph.task = source.task;
    graph.context = source.context;
    return graph;
  }

  int BaselineCmd(bool similar) const {
    CheckInputs({&opt_.in, &opt_.word_vectors, &opt_.stopwords});
    const Dataset tasks = LoadGraphs(opt_.in);
    std::shared_ptr<const EmbeddingStore> store;
    std::set<std::string> stopwords;
    if (similar) {
      if (opt_.word_vectors.empty()) throw ValidationError("repeat-similar needs --word-vectors");
      store = Store(opt_.word_vectors, ParseEmbeddingFormat(opt_.word_vectors_format));
      stopwords = Stopwords();
    }
    std::vector<std::string> warnings;
    Dataset output;
    for (size_t i = 0; i < tasks.tasks.size(); ++i) {
      output.tasks.push_back(Baseline(tasks.tasks[i], i, opt_.m, opt_.k, store.get(), stopwords,
                                      &warnings));
    }
    Warn(warnings);
    return EmitGraphs(output, "generated");
  }

  int BaselineSweepCmd() const {
    CheckInputs({&opt_.gold, &opt_.embeddings, &opt_.word_vectors, &opt_.stopwords});
    const bool similar = opt_.baseline == "repeat-similar";
    if (!similar && opt_.baseline != "repeat-task") {
      throw ValidationError("--baseline must be repeat-task or repeat-similar");
    }
    const Dataset gold = LoadGraphs(opt_.gold);
    std::shared_ptr<const EmbeddingStore> store;
    std::set<std::string> stopwords;
    if (similar) {
      if (opt_.word_vectors.empty()) throw ValidationError("repeat-similar needs --word-vectors");
      store = Store(opt_.word_vectors, ParseEmbeddingFormat(opt_.word_vectors_format));
      stopwords = Stopwords();
    }
    const SimilarityProvider provider = Provider();
    const std::vector<size_t> ks = similar ? opt_.k_values : std::vector<size_t>{0};
    std::ostringstream body;
    body << "baseline,m,k";
    for (NodeFamily f : kNodeFamilies) body << ',' << NodeFamilyName(f) << "_f1";
    body << '\n';
    double best_f1 = -1.0;
    size_t best_m = 0, best_k = 0;
    for (size_t m : opt_.m_values) {
      for (size_t k : ks) {
        Dataset pred;
        std::vector<std::string> warnings;
        for (size_t i = 0; i < gold.tasks.size(); ++i) {
          pred.tasks.push_back(Baseline(gold.tasks[i], i, m, k, store.get(), stopwords, &warnings));
        }
        const NodeMetricsReport report = EvalCorpus(gold, pred, provider, opt_.jobs);
        body << opt_.baseline << ',' << m << ',' << k;
        for (NodeFamily f : kNodeFamilies) body << ',' << FormatFixed(report.corpus[f].f1);
        body << '\n';
        const double f1 = report.corpus[NodeFamily::kHungarian].f1;
        if (f1 > best_f1) {
          best_f1 = f1;
          best_m = m;
          best_k = k;
        }
      }
    }
    std::ostringstream summary;
    summary << "best by hungarian F1: m=" << best_m;
    if (similar) summary << " k=" << best_k;
    summary << " (F1=" << FormatFixed(best_f1, 4) << ")\n";
    Emit(body.str(), summary.str());
    return kExitOk;
  }

  int ConvertTaskLamaCmd() const {
    CheckInputs({&opt_.in});
    std::vector<std::string> warnings;
    const Dataset dataset = ConvertTaskLama(opt_.in, &warnings);
    Warn(warnings);
    const DatasetStats stats = ComputeStats(dataset);
    std::ostringstream summary;
    summary << "tasks " << stats.tasks << ", steps " << stats.steps << ", edges " << stats.edges
            << ", steps/task " << FormatFixed(stats.steps_per_task, 2) << ", edges/task "
            << FormatFixed(stats.edges_per_task, 2) << '\n';
    std::ostringstream body;
    WriteGraphs(body, dataset);
    Emit(body.str(), summary.str());
    return kExitOk;
  }

  int ValidateCmd() const {
    CheckInputs({&opt_.in});
    const Dataset dataset = LoadGraphs(opt_.in);
    size_t cyclic = 0;
    for (const TaskGraph& graph : dataset.tasks) {
      const DagCheck check = ValidateDag(graph);
      if (check.acyclic) continue;
      ++cyclic;
      err_ << "task '" << graph.task_id << "': cycle";
      for (const std::string& id : check.cycle) err_ << ' ' << id;
      err_ << '\n';
    }
    const DatasetStats stats = ComputeStats(dataset);
    out_ << stats.tasks << " tasks, " << stats.steps << " steps, " << stats.edges << " edges, "
         << cyclic << " cyclic\n";
    return cyclic > 0 && opt_.require_dag ? kExitValidation : kExitOk;
  }

 private:
  int EmitGraphs(const Dataset& dataset, const std::string& verb) const {
    std::ostringstream body;
    WriteGraphs(body, dataset);
    const DatasetStats stats = ComputeStats(dataset);
    Emit(body.str(), verb + " " + std::to_string(stats.tasks) + " graphs, " +
                         std::to_string(stats.edges) + " edges\n");
    return kExitOk;
  }

  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

void AddProvider(CLI::App* cmd, Options* o) {
  cmd->add_option("--sim", o->sim, "Similarity provider: token, embedding or exact");
  cmd->add_option("--embeddings", o->embeddings, "Embedding file for --sim embedding");
  cmd->add_option("--embeddings-format", o->embeddings_format,
                  "Embedding file format: step_jsonl or word_text");
}

void AddOut(CLI::App* cmd, Options* o) {
  cmd->add_option("--out", o->out, "Output file (default: standard output)");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Evaluate and construct task graphs.", "taskgraph"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  std::map<CLI::App*, std::function<int(const Runner&)>> commands;
  auto add = [&](const char* name, const char* help, std::function<int(const Runner&)> run) {
    CLI::App* cmd = app.add_subcommand(name, help);
    commands[cmd] = std::move(run);
    return cmd;
  };

  CLI::App* cmd = add("eval-nodes", "Step metrics: Rouge, legacy, Hungarian, relaxed Hungarian",
                      [](const Runner& r) { return r.EvalNodesCmd(); });
  cmd->add_option("--gold", o.gold, "Gold graph JSONL")->required();
  cmd->add_option("--pred", o.pred, "Predicted graph JSONL")->required();
  cmd->add_option("--format", o.format, "Report format: json or csv");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  cmd->add_flag("--mean-f", o.mean_f, "Also report the mean of per-task F1/F2");
  cmd->add_flag("!--no-per-task", o.per_task, "Omit the per-task breakdown from JSON");
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("eval-edges", "Edge metrics: in-degree, out-degree, step proximity",
            [](const Runner& r) { return r.EvalEdgesCmd(); });
  cmd->add_option("--gold", o.gold, "Gold graph JSONL")->required();
  cmd->add_option("--pred", o.pred, "Predicted graph JSONL")->required();
  cmd->add_option("--format", o.format, "Report format: json or csv");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  cmd->add_flag("!--no-per-task", o.per_task, "Omit the per-task breakdown from JSON");
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("eval-pairwise", "Accuracy of pairwise order labels against gold reachability",
            [](const Runner& r) { return r.EvalPairwiseCmd(); });
  cmd->add_option("--gold", o.gold, "Gold graph JSONL")->required();
  cmd->add_option("--labels", o.labels, "Pairwise label JSONL")->required();
  cmd->add_option("--format", o.format, "Report format: json or csv");
  AddOut(cmd, &o);

  cmd = add("graph-from-sequences", "Aggregate step sequences into a partial-order graph",
            [](const Runner& r) { return r.GraphFromSequencesCmd(); });
  cmd->add_option("--in", o.in, "Sequence JSONL")->required();
  cmd->add_option("--output-mode", o.output_mode, "reduction or closure");
  AddOut(cmd, &o);

  cmd = add("graph-linear", "Chain graph from the first sequence of each task",
            [](const Runner& r) { return r.GraphLinearCmd(); });
  cmd->add_option("--in", o.in, "Sequence JSONL")->required();
  AddOut(cmd, &o);

  cmd = add("decycle", "Remove edges inside strongly connected components",
            [](const Runner& r) { return r.DecycleCmd(); });
  cmd->add_option("--in", o.in, "Graph JSONL")->required();
  cmd->add_option("--labels", o.labels,
                  "Pairwise label JSONL; edges are rebuilt from these labels over the steps of --in");
  AddOut(cmd, &o);

  cmd = add("merge-sequences", "Deduplicate and concatenate multiple sequences per task",
            [](const Runner& r) { return r.MergeSequencesCmd(); });
  cmd->add_option("--in", o.in, "Sequence JSONL")->required();
  cmd->add_option("--threshold", o.threshold, "Drop steps more similar than this to a kept step");
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("fit-threshold", "Pick the dedup threshold maximizing accuracy on labeled pairs",
            [](const Runner& r) { return r.FitThresholdCmd(); });
  cmd->add_option("--pairs", o.pairs, "JSONL of {a, b, label: dup|distinct}")->required();
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("sf-dataset", "Score candidate sequences against gold (Hungarian F1)",
            [](const Runner& r) { return r.SfDatasetCmd(); });
  cmd->add_option("--gold", o.gold, "Gold graph JSONL")->required();
  cmd->add_option("--candidates", o.candidates, "Candidate sequence JSONL")->required();
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("swap-candidates", "All single-swap variants of each task's first sequence",
            [](const Runner& r) { return r.SwapCandidatesCmd(); });
  cmd->add_option("--in", o.in, "Sequence JSONL")->required();
  cmd->add_option("--limit", o.limit, "Maximum candidates per task");
  cmd->add_flag("--include-original", o.include_original, "Prepend the unswapped sequence");
  AddOut(cmd, &o);

  cmd = add("select-top", "Keep the highest-scoring fraction of sequences per task",
            [](const Runner& r) { return r.SelectTopCmd(); });
  cmd->add_option("--in", o.in, "Scored sequence JSONL")->required();
  cmd->add_option("--keep-fraction", o.keep_fraction, "Fraction kept, in (0,1]");
  cmd->add_flag("--as-sequences", o.as_sequences, "Emit sequence-set JSONL instead");
  cmd->add_option("--tasks", o.tasks, "Graph JSONL supplying task text for --as-sequences");
  AddOut(cmd, &o);

  cmd = add("split-dataset", "Cluster tasks by title similarity and split by cluster",
            [](const Runner& r) { return r.SplitDatasetCmd(); });
  cmd->add_option("--in", o.in, "Graph JSONL")->required();
  cmd->add_option("--link-threshold", o.link_threshold, "Join tasks more similar than this");
  cmd->add_option("--fractions", o.fractions, "train,validation,test")->delimiter(',');
  cmd->add_option("--seed", o.seed, "Random seed");
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("baseline-repeat-task", "Repeat the task text m times",
            [](const Runner& r) { return r.BaselineCmd(false); });
  cmd->add_option("--in", o.in, "Graph JSONL providing the tasks")->required();
  cmd->add_option("--m", o.m, "Number of steps");
  AddOut(cmd, &o);

  cmd = add("baseline-repeat-similar", "Repeat the task with one token replaced by a neighbor",
            [](const Runner& r) { return r.BaselineCmd(true); });
  cmd->add_option("--in", o.in, "Graph JSONL providing the tasks")->required();
  cmd->add_option("--m", o.m, "Number of steps");
  cmd->add_option("--k", o.k, "Neighbors sampled from");
  cmd->add_option("--seed", o.seed, "Random seed (task i uses seed xor i)");
  cmd->add_option("--word-vectors", o.word_vectors, "Word vectors, e.g. GloVe text")->required();
  cmd->add_option("--word-vectors-format", o.word_vectors_format, "word_text or step_jsonl");
  cmd->add_option("--stopwords", o.stopwords, "Stopword file (default: built-in list)");
  AddOut(cmd, &o);

  cmd = add("baseline-sweep", "Tune baseline m (and k) by node metrics on a gold set",
            [](const Runner& r) { return r.BaselineSweepCmd(); });
  cmd->add_option("--gold", o.gold, "Gold graph JSONL, typically the validation split")->required();
  cmd->add_option("--baseline", o.baseline, "repeat-task or repeat-similar");
  cmd->add_option("--m-values", o.m_values, "Comma-separated m values")->delimiter(',');
  cmd->add_option("--k-values", o.k_values, "Comma-separated k values")->delimiter(',');
  cmd->add_option("--word-vectors", o.word_vectors, "Word vectors for repeat-similar");
  cmd->add_option("--word-vectors-format", o.word_vectors_format, "word_text or step_jsonl");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--stopwords", o.stopwords, "Stopword file (default: built-in list)");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  AddProvider(cmd, &o);
  AddOut(cmd, &o);

  cmd = add("convert-tasklama", "Convert extracted TaskLAMA annotations to graph JSONL",
            [](const Runner& r) { return r.ConvertTaskLamaCmd(); });
  cmd->add_option("--in", o.in, "Extracted JSON/JSONL file or directory")->required();
  AddOut(cmd, &o);

  cmd = add("validate", "Load graphs and report cycles",
            [](const Runner& r) { return r.ValidateCmd(); });
  cmd->add_option("--in", o.in, "Graph JSONL")->required();
  cmd->add_flag("--require-dag", o.require_dag, "Exit 1 when any graph is cyclic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const Runner runner(o, out, err);
  try {
    for (const auto& [sub, run] : commands) {
      if (sub->parsed()) return run(runner);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace taskgraph
