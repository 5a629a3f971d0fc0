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

// Conversion of the published TaskLAMA annotations into task-graph JSONL.
//
// The archive layout is not pinned down, so the reader accepts the shapes a
// JSON export is likely to take: a JSON array of task records, an object
// mapping split names to such arrays, or JSON Lines. Unzip the archive
// first and pass either one file or the extracted directory.

#ifndef TASKGRAPH_TASKLAMA_H_
#define TASKGRAPH_TASKLAMA_H_

#include <string>
#include <vector>

#include "taskgraph/core.h"

namespace taskgraph {

// Field lookup per record (first present key wins):
//   task id   task_id, id, uid          (else synthesized "t<index>")
//   task      task, title, complex_task, query
//   context   context, assumption, assumptions
//   steps     steps: strings, or objects with text/step/description and an
//             optional id
//   edges     edges, dependencies, temporal_dependencies: [a, b] pairs or
//             "a->b" / "a,b" strings; a and b are step ids or 0/1-based
//             positions
// Split names are taken from the enclosing object key or, for directories,
// from file names containing train/valid/dev/test.
Dataset ConvertTaskLama(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Converts one already parsed record.
TaskGraph TaskLamaRecordToGraph(const Json& record, size_t index,
                                std::vector<std::string>* warnings = nullptr);

}  // namespace taskgraph

#endif  // TASKGRAPH_TASKLAMA_H_
