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
#include <sstream>

#include "gtest/gtest.h"
#include "taskgraph/core.h"
#include "test_util.h"

namespace taskgraph {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "taskgraph");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("taskgraph_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& content) {
    std::ofstream(dir_ / name) << content;
    return (dir_ / name).string();
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<std::string> CsvRows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return rows;
}

TEST_F(CliTest, EvalNodesCsv) {
  const Result r = Invoke({"eval-nodes", "--gold", DataPath("fixtures/sample_gold.jsonl"), "--pred",
                        DataPath("fixtures/sample_pred.jsonl"), "--sim", "token", "--format",
                        "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = CsvRows(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "metric,precision,recall,f1,f2");
}

TEST_F(CliTest, DuplicationFixture) {
  const std::string vectors = DataPath("fixtures/m_vectors.jsonl");
  auto legacy_row = [&](const std::string& pred) {
    const Result r = Invoke({"eval-nodes", "--gold", DataPath("fixtures/m_gold.jsonl"), "--pred",
                          DataPath(pred), "--sim", "embedding", "--embeddings", vectors,
                          "--format", "csv"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const auto rows = CsvRows(r.out);
    return rows.size() == 7 ? rows[4] + "|" + rows[5] : r.out;
  };
  EXPECT_EQ(legacy_row("fixtures/m1_pred.jsonl"),
            "legacy,0.300000,0.300000,0.300000,0.300000|"
            "hungarian,0.300000,0.300000,0.300000,0.300000");
  EXPECT_EQ(legacy_row("fixtures/m2_pred.jsonl"),
            "legacy,0.400000,0.300000,0.342857,0.315789|"
            "hungarian,0.200000,0.300000,0.240000,0.272727");
}

TEST_F(CliTest, ReportsToFileAreByteIdentical) {
  std::vector<std::string> args = {"eval-edges", "--gold", DataPath("fixtures/sample_gold.jsonl"),
                                   "--pred", DataPath("fixtures/sample_pred.jsonl"), "--out",
                                   Path("a.json")};
  const Result first = Invoke(args);
  ASSERT_EQ(first.code, kExitOk) << first.err;
  EXPECT_FALSE(first.out.empty());  // summary
  args.back() = Path("b.json");
  args.push_back("--jobs");
  args.push_back("3");
  ASSERT_EQ(Invoke(args).code, kExitOk);
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  EXPECT_TRUE(Json::parse(Slurp(Path("a.json"))).contains("corpus"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Invoke({"eval-nodes", "--gold", Path("missing.jsonl"), "--pred",
                 DataPath("fixtures/sample_pred.jsonl")})
                .code,
            kExitIo);
  const std::string bad = Write("bad.jsonl", "{\"task_id\": \"x\", \"task\": \"t\"}\n");
  const Result r = Invoke({"eval-nodes", "--gold", bad, "--pred", bad});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("bad.jsonl:1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("x"), std::string::npos);
  // Missing prediction names the task.
  const Result missing = Invoke({"eval-nodes", "--gold", DataPath("fixtures/sample_gold.jsonl"),
                              "--pred", DataPath("fixtures/m1_pred.jsonl")});
  EXPECT_EQ(missing.code, kExitValidation);
  EXPECT_NE(missing.err.find("t1"), std::string::npos);
  EXPECT_EQ(Invoke({"no-such-command"}).code, kExitValidation);
  EXPECT_EQ(Invoke({"select-top", "--in", DataPath("fixtures/sample_gold.jsonl"), "--keep-fraction",
                 "0"})
                .code,
            kExitValidation);
}

TEST_F(CliTest, HelpListsDefaults) {
  const Result r = Invoke({"split-dataset", "--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("--seed"), std::string::npos);
  EXPECT_NE(r.out.find("20230601"), std::string::npos);
  EXPECT_NE(r.out.find("0.5"), std::string::npos);
  const Result merge = Invoke({"merge-sequences", "--help"});
  EXPECT_NE(merge.out.find("0.9"), std::string::npos);
  EXPECT_NE(merge.out.find("token"), std::string::npos);
}

TEST_F(CliTest, GraphFromSequences) {
  const Result r = Invoke({"graph-from-sequences", "--in", DataPath("fixtures/sample_sequences.jsonl"),
                        "--output-mode", "reduction"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  const Dataset d = ReadGraphs(in, "stdout");
  ASSERT_EQ(d.tasks.size(), 2u);
  EXPECT_EQ(d.tasks[0].edges.size(), 4u);  // fruit -> {bananas, milk} -> blend
  EXPECT_EQ(d.tasks[1].edges.size(), 3u);
  EXPECT_EQ(Invoke({"graph-from-sequences", "--in", DataPath("fixtures/sample_sequences.jsonl"),
                 "--output-mode", "everything"})
                .code,
            kExitValidation);
}

TEST_F(CliTest, PipelineCommands) {
  const std::string seqs = DataPath("fixtures/sample_sequences.jsonl");
  const std::string gold = DataPath("fixtures/sample_gold.jsonl");
  ASSERT_EQ(Invoke({"graph-linear", "--in", seqs, "--out", Path("linear.jsonl")}).code, kExitOk);
  EXPECT_EQ(LoadGraphs(Path("linear.jsonl")).tasks.size(), 2u);
  ASSERT_EQ(Invoke({"merge-sequences", "--in", seqs, "--out", Path("merged.jsonl")}).code, kExitOk);
  ASSERT_EQ(Invoke({"swap-candidates", "--in", seqs, "--limit", "2", "--out", Path("swaps.jsonl")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"sf-dataset", "--gold", gold, "--candidates", Path("swaps.jsonl"), "--out",
                 Path("scored.jsonl")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"select-top", "--in", Path("scored.jsonl"), "--out", Path("top.jsonl")}).code,
            kExitOk);
  ASSERT_EQ(Invoke({"decycle", "--in", gold, "--out", Path("decycled.jsonl")}).code, kExitOk);
  EXPECT_EQ(Slurp(Path("decycled.jsonl")), [&] {
    std::ostringstream out;
    WriteGraphs(out, LoadGraphs(gold));
    return out.str();
  }());
  ASSERT_EQ(Invoke({"split-dataset", "--in", gold, "--out", Path("split.jsonl")}).code, kExitOk);
  ASSERT_EQ(Invoke({"split-dataset", "--in", gold, "--out", Path("split2.jsonl")}).code, kExitOk);
  EXPECT_EQ(Slurp(Path("split.jsonl")), Slurp(Path("split2.jsonl")));
  ASSERT_EQ(Invoke({"baseline-repeat-task", "--in", gold, "--m", "2", "--out", Path("rt.jsonl")})
                .code,
            kExitOk);
  const Dataset rt = LoadGraphs(Path("rt.jsonl"));
  ASSERT_EQ(rt.tasks.size(), 3u);
  EXPECT_EQ(rt.tasks[0].steps[1].text, "make a smoothie");
  const Result valid = Invoke({"validate", "--in", gold, "--require-dag"});
  EXPECT_EQ(valid.code, kExitOk) << valid.err;
}

TEST_F(CliTest, RepeatSimilarIsReproducible) {
  const std::string vectors = Write("glove.txt",
                                    "smoothie 1 0 0\nyogurt 0.9 0.1 0\njuice 0.8 0.3 0\n"
                                    "tree 0 1 0\nshrub 0 0.9 0.1\nparty 0 0 1\nfeast 0.1 0 0.9\n");
  auto run = [&](const std::string& out) {
    return Invoke({"baseline-repeat-similar", "--in", DataPath("fixtures/sample_gold.jsonl"),
                "--word-vectors", vectors, "--m", "4", "--k", "2", "--out", Path(out)});
  };
  ASSERT_EQ(run("a.jsonl").code, kExitOk);
  ASSERT_EQ(run("b.jsonl").code, kExitOk);
  EXPECT_EQ(Slurp(Path("a.jsonl")), Slurp(Path("b.jsonl")));
  const Dataset d = LoadGraphs(Path("a.jsonl"));
  for (const Step& s : d.tasks[0].steps) {
    EXPECT_TRUE(s.text == "make a yogurt" || s.text == "make a juice") << s.text;
  }
}

}  // namespace
}  // namespace taskgraph
