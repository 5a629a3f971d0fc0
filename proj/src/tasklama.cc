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

#include "taskgraph/tasklama.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace taskgraph {
namespace {

namespace fs = std::filesystem;

const Json* FirstOf(const Json& record, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = record.find(key);
    if (it != record.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string AsText(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return value.dump();
}

std::optional<std::string> StepText(const Json& step) {
  if (step.is_string()) return step.get<std::string>();
  if (step.is_object()) {
    if (const Json* text = FirstOf(step, {"text", "step", "description"})) return AsText(*text);
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> RawEdges(const Json& edges) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Json& edge : edges) {
    if (edge.is_array() && edge.size() == 2) {
      out.emplace_back(AsText(edge[0]), AsText(edge[1]));
    } else if (edge.is_object()) {
      const Json* from = FirstOf(edge, {"from", "source", "before"});
      const Json* to = FirstOf(edge, {"to", "target", "after"});
      if (from && to) out.emplace_back(AsText(*from), AsText(*to));
    } else if (edge.is_string()) {
      std::string s = edge.get<std::string>();
      size_t cut = s.find("->");
      size_t skip = 2;
      if (cut == std::string::npos) {
        cut = s.find(',');
        skip = 1;
      }
      if (cut == std::string::npos) continue;
      auto trim = [](std::string x) {
        const auto a = x.find_first_not_of(" \t");
        const auto b = x.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
      };
      out.emplace_back(trim(s.substr(0, cut)), trim(s.substr(cut + skip)));
    }
  }
  return out;
}

bool IsIndex(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<Json> RecordsFromText(const std::string& text, const std::string& source,
                                  std::vector<std::optional<std::string>>* splits,
                                  const std::optional<std::string>& file_split) {
  std::vector<Json> records;
  auto add = [&](const Json& record, const std::optional<std::string>& split) {
    records.push_back(record);
    splits->push_back(split);
  };
  Json whole;
  bool parsed = true;
  try {
    whole = Json::parse(text);
  } catch (const Json::parse_error&) {
    parsed = false;
  }
  if (parsed && whole.is_array()) {
    for (const Json& r : whole) add(r, file_split);
    return records;
  }
  if (parsed && whole.is_object() && FirstOf(whole, {"steps"}) == nullptr) {
    for (auto it = whole.begin(); it != whole.end(); ++it) {
      if (!it->is_array()) continue;
      for (const Json& r : *it) add(r, it.key());
    }
    return records;
  }
  std::istringstream in(text);
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      add(Json::parse(line), file_split);
    } catch (const Json::parse_error& e) {
      throw ValidationError(source + ":" + std::to_string(line_number) +
                            ": malformed JSON: " + e.what());
    }
  }
  return records;
}

std::optional<std::string> SplitFromName(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower.find("train") != std::string::npos) return "train";
  if (lower.find("valid") != std::string::npos || lower.find("dev") != std::string::npos) {
    return "validation";
  }
  if (lower.find("test") != std::string::npos) return "test";
  return std::nullopt;
}

std::optional<Split> NormalizeSplit(const std::string& name) {
  const auto guess = SplitFromName(name);
  if (!guess) return std::nullopt;
  return ParseSplit(*guess);
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TaskGraph TaskLamaRecordToGraph(const Json& record, size_t index,
                                std::vector<std::string>* warnings) {
  if (!record.is_object()) throw ValidationError("record " + std::to_string(index) + " is not an object");
  TaskGraph graph;
  const Json* id = FirstOf(record, {"task_id", "id", "uid"});
  graph.task_id = id ? AsText(*id) : "t" + std::to_string(index);
  const Json* task = FirstOf(record, {"task", "title", "complex_task", "query"});
  if (task == nullptr) throw ValidationError("task '" + graph.task_id + "': no task text field");
  graph.task = AsText(*task);
  if (const Json* context = FirstOf(record, {"context", "assumption", "assumptions"})) {
    if (context->is_array()) {
      std::string joined;
      for (const Json& part : *context) joined += (joined.empty() ? "" : " ") + AsText(part);
      graph.context = joined;
    } else {
      graph.context = AsText(*context);
    }
  }
  const Json* steps = FirstOf(record, {"steps"});
  if (steps == nullptr || !steps->is_array()) {
    throw ValidationError("task '" + graph.task_id + "': no steps array");
  }
  for (size_t i = 0; i < steps->size(); ++i) {
    const Json& step = (*steps)[i];
    auto text = StepText(step);
    if (!text) throw ValidationError("task '" + graph.task_id + "': unreadable step " + std::to_string(i));
    std::string step_id = "s" + std::to_string(i);
    if (step.is_object()) {
      if (const Json* sid = FirstOf(step, {"id", "step_id"})) step_id = AsText(*sid);
    }
    graph.steps.push_back({step_id, *text});
  }

  const Json* edges = FirstOf(record, {"edges", "dependencies", "temporal_dependencies"});
  if (edges != nullptr && edges->is_array()) {
    const auto raw = RawEdges(*edges);
    // Endpoints that are not step ids are positions; they are 1-based when
    // no endpoint is 0 and some endpoint equals the step count.
    bool any_zero = false, any_n = false;
    for (const auto& [a, b] : raw) {
      for (const std::string* e : {&a, &b}) {
        if (graph.IndexOf(*e) >= 0 || !IsIndex(*e)) continue;
        any_zero = any_zero || std::stoul(*e) == 0;
        any_n = any_n || std::stoul(*e) == graph.steps.size();
      }
    }
    const size_t base = (!any_zero && any_n) ? 1 : 0;
    auto resolve = [&](const std::string& e) -> std::optional<std::string> {
      if (graph.IndexOf(e) >= 0) return e;
      if (IsIndex(e)) {
        const size_t pos = std::stoul(e);
        if (pos >= base && pos - base < graph.steps.size()) return graph.steps[pos - base].id;
      }
      return std::nullopt;
    };
    std::set<Edge> seen;
    for (const auto& [a, b] : raw) {
      auto from = resolve(a);
      auto to = resolve(b);
      if (!from || !to || *from == *to || !seen.insert({*from, *to}).second) {
        if (warnings != nullptr) {
          warnings->push_back("task '" + graph.task_id + "': dropped dependency (" + a + ", " + b + ")");
        }
        continue;
      }
      graph.edges.emplace_back(*from, *to);
    }
  }
  ValidateTaskGraph(graph);
  return graph;
}

Dataset ConvertTaskLama(const std::string& path, std::vector<std::string>* warnings) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(path + ": no .json or .jsonl files found");
  } else if (fs::exists(path, ec)) {
    files.push_back(path);
  } else {
    throw IoError(path + ": no such file or directory");
  }

  Dataset dataset;
  std::map<std::string, Split> split;
  std::set<std::string> ids;
  size_t index = 0;
  for (const fs::path& file : files) {
    std::vector<std::optional<std::string>> splits;
    const auto file_split = files.size() > 1 ? SplitFromName(file.filename().string()) : std::nullopt;
    const auto records = RecordsFromText(ReadAll(file), file.string(), &splits, file_split);
    for (size_t r = 0; r < records.size(); ++r, ++index) {
      TaskGraph graph = TaskLamaRecordToGraph(records[r], index, warnings);
      if (!ids.insert(graph.task_id).second) {
        throw ValidationError(file.string() + ": duplicate task_id '" + graph.task_id + "'");
      }
      if (splits[r]) {
        if (auto s = NormalizeSplit(*splits[r])) split[graph.task_id] = *s;
      }
      dataset.tasks.push_back(std::move(graph));
    }
  }
  if (!split.empty() && split.size() == dataset.tasks.size()) dataset.split = std::move(split);
  return dataset;
}

}  // namespace taskgraph
