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

// Command-line entry point. Exit codes: 0 success, 1 invalid input or
// arguments, 2 I/O failure.

#ifndef TASKGRAPH_CLI_H_
#define TASKGRAPH_CLI_H_

#include <iosfwd>

namespace taskgraph {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

inline constexpr unsigned long long kDefaultSeed = 20230601;

// Reports go to --out when given (with a short summary on `out`), otherwise
// to `out`. Diagnostics go to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace taskgraph

#endif  // TASKGRAPH_CLI_H_
