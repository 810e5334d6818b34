// Copyright 2026 The docgraph Authors.
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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "docgraph/ingest.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
};

Result Cli(const std::string& args) {
  const std::string cmd = std::string(DOCGRAPH_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("docgraph_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kSmall =
    "--set model.ip_dim=16 --set model.ep_inner=16 --set model.text_dim=32 "
    "--set train.epochs=3";

TEST_F(CliTest, SynthIsByteIdentical) {
  ASSERT_EQ(Cli("synth --docs 4 --seed 3 -o " + P("a.json")).code, 0);
  ASSERT_EQ(Cli("synth --docs 4 --seed 3 -o " + P("b.json")).code, 0);
  EXPECT_EQ(Slurp(P("a.json")), Slurp(P("b.json")));
  ASSERT_EQ(Cli("synth --kind invoices --tables 2 --docs 2 -o " + P("c.json")).code, 0);
  EXPECT_EQ(docgraph::LoadDataset(P("c.json"), docgraph::RvlSchema()).size(), 2u);
}

TEST_F(CliTest, TrainPredictEvalRender) {
  ASSERT_EQ(Cli("synth --docs 6 -o " + P("d.json")).code, 0);
  const std::string common = std::string(kSmall) + " --set run.dir=" + P("runs");
  const Result build = Cli("build " + common + " -d " + P("d.json") + " -o " + P("g.json"));
  ASSERT_EQ(build.code, 0) << build.out;
  EXPECT_TRUE(fs::exists(P("g.json.config")));

  const Result train = Cli("train " + common + " -d " + P("g.json") + " --split 4,1,1");
  ASSERT_EQ(train.code, 0) << train.out;
  EXPECT_NE(train.out.find("edge_f1.key-value"), std::string::npos) << train.out;
  const std::string run = P("runs") + "/default";
  for (const char* f : {"metrics.json", "config-snapshot.cfg", "fold0/checkpoint.bin",
                        "fold0/metrics.json", "fold0/log.txt"}) {
    EXPECT_TRUE(fs::exists(run + "/" + f)) << f;
  }

  const std::string ckpt = run + "/fold0/checkpoint.bin";
  ASSERT_EQ(Cli("predict " + common + " --checkpoint " + ckpt + " -d " + P("g.json") +
                " -o " + P("p.jsonl"))
                .code,
            0);
  const Result by_ckpt = Cli("eval " + common + " --checkpoint " + ckpt + " -d " + P("g.json"));
  const Result by_pred =
      Cli("eval " + common + " --predictions " + P("p.jsonl") + " -d " + P("g.json"));
  ASSERT_EQ(by_ckpt.code, 0) << by_ckpt.out;
  EXPECT_EQ(by_ckpt.out, by_pred.out);

  ASSERT_EQ(Cli("render " + common + " -d " + P("g.json") + " --predictions " + P("p.jsonl") +
                " -o " + P("svg"))
                .code,
            0);
  EXPECT_EQ(std::distance(fs::directory_iterator(P("svg")), fs::directory_iterator()), 6);
}

TEST_F(CliTest, MismatchedCheckpointIsRejected) {
  ASSERT_EQ(Cli("synth --docs 3 -o " + P("d.json")).code, 0);
  const std::string common = std::string(kSmall) + " --set run.dir=" + P("runs");
  ASSERT_EQ(Cli("train " + common + " -d " + P("d.json") + " --split 1,1,1").code, 0);
  const Result r = Cli("predict " + common + " --set model.ip_dim=8 --checkpoint " + P("runs") +
                       "/default/fold0/checkpoint.bin -d " + P("d.json") + " -o " + P("p.jsonl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("checkpoint/config mismatch"), std::string::npos) << r.out;
}

TEST_F(CliTest, ErrorsExitWithStatusOne) {
  const Result r = Cli("build -d " + P("missing.json") + " -o " + P("g.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("docgraph: error:"), std::string::npos) << r.out;
}

}  // namespace
