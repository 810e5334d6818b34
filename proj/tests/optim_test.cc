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

#include "docgraph/optim.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "docgraph/autodiff.h"

namespace docgraph {
namespace {

// One backward pass of loss = g * w so that dL/dw = g.
void SetGradient(ParamStore& store, ParamId id, Real g) {
  Tape t(store);
  t.Backward(t.Sum(t.Scale(t.Parameter(id), g)));
}

TEST(AdamWTest, FirstStepMatchesHandCalculation) {
  ParamStore store;
  ParamId w = store.Add("w", Tensor::Scalar(1.0));
  AdamW opt(store, {.lr = 1e-3, .weight_decay = 1e-4});
  SetGradient(store, w, 0.5);
  opt.Step(store);
  // m = 0.05, v = 0.00025; bias-corrected m_hat = 0.5, v_hat = 0.25.
  const double expected = 1.0 * (1 - 1e-3 * 1e-4) - 1e-3 * 0.5 / (0.5 + 1e-8);
  EXPECT_NEAR(store.value(w).item(), expected, 1e-15);
}

TEST(AdamWTest, SecondStepMatchesHandCalculation) {
  ParamStore store;
  ParamId w = store.Add("w", Tensor::Scalar(-2.0));
  AdamW opt(store, {.lr = 0.1, .weight_decay = 0.0});
  SetGradient(store, w, 1.0);
  opt.Step(store);
  SetGradient(store, w, -3.0);
  opt.Step(store);
  double p = -2.0 - 0.1 * 1.0 / (1.0 + 1e-8);
  const double m = 0.9 * 0.1 + 0.1 * -3.0;
  const double v = 0.999 * 0.001 + 0.001 * 9.0;
  const double m_hat = m / (1 - 0.81), v_hat = v / (1 - 0.999 * 0.999);
  p -= 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8);
  EXPECT_NEAR(store.value(w).item(), p, 1e-12);
}

TEST(AdamWTest, ZeroGradientAndNoDecayLeavesParameters) {
  ParamStore store;
  ParamId w = store.Add("w", Tensor(1, 3, std::vector<Real>{1, -2, 3}));
  AdamW opt(store, {.lr = 1e-3, .weight_decay = 0});
  SetGradient(store, w, 0);
  opt.Step(store);
  EXPECT_EQ(store.value(w), Tensor(1, 3, std::vector<Real>{1, -2, 3}));
}

TEST(AdamWTest, DecoupledDecayShrinksZeroGradientWeight) {
  ParamStore store;
  ParamId w = store.Add("w", Tensor::Scalar(2.0));
  AdamW opt(store, {.lr = 1e-3, .weight_decay = 1e-4});
  SetGradient(store, w, 0);
  opt.Step(store);
  EXPECT_NEAR(store.value(w).item(), 2.0 - 1e-3 * 1e-4 * 2.0, 1e-15);
}

TEST(AdamWTest, StepBeforeBackwardIsAnError) {
  ParamStore store;
  store.Add("w", Tensor::Scalar(1.0));
  AdamW opt(store, {});
  EXPECT_THROW(opt.Step(store), Error);
}

TEST(AdamWTest, StepClearsGradients) {
  ParamStore store;
  ParamId w = store.Add("w", Tensor::Scalar(1.0));
  AdamW opt(store, {});
  SetGradient(store, w, 2.0);
  opt.Step(store);
  EXPECT_EQ(store.grad(w).item(), 0);
  EXPECT_THROW(opt.Step(store), Error);
}

class CheckpointTest : public ::testing::Test {
 protected:
  std::filesystem::path path_ =
      std::filesystem::temp_directory_path() / "docgraph_ckpt_test.bin";
  void TearDown() override { std::filesystem::remove(path_); }
};

TEST_F(CheckpointTest, RoundTripsValuesAndSnapshot) {
  ParamStore store(3);
  store.AddUniform("a", 3, 4, 1.0);
  store.Add("b", Tensor(1, 2, std::vector<Real>{-0.0, 1e-300}));
  SaveCheckpoint(path_, store, "model.ip_dim = 8\n");
  Checkpoint c = LoadCheckpoint(path_);
  EXPECT_EQ(c.config_snapshot, "model.ip_dim = 8\n");
  ASSERT_EQ(c.params.size(), 2u);
  EXPECT_EQ(c.params[0].first, "a");
  EXPECT_EQ(c.params[0].second, store.value(0));

  ParamStore other(99);
  other.AddUniform("a", 3, 4, 1.0);
  other.AddZeros("b", 1, 2);
  RestoreParams(c, other);
  EXPECT_EQ(other.value(0), store.value(0));
  EXPECT_EQ(other.value(1), store.value(1));
}

TEST_F(CheckpointTest, FileLayoutHasDocumentedSize) {
  ParamStore store;
  store.AddZeros("w", 2, 3);
  SaveCheckpoint(path_, store, "xyz");
  // magic + version + (len + 3) + count + (len + 1 + rank + 2 dims + 6 values)
  const size_t expected = 8 + 4 + (8 + 3) + 4 + (4 + 1 + 4 + 16 + 48);
  EXPECT_EQ(std::filesystem::file_size(path_), expected);
  std::ifstream in(path_, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  EXPECT_EQ(std::string(magic, 6), "DGCKPT");
}

TEST_F(CheckpointTest, ShapeMismatchIsReported) {
  ParamStore store;
  store.AddZeros("w", 2, 3);
  SaveCheckpoint(path_, store, "");
  ParamStore other;
  other.AddZeros("w", 3, 2);
  try {
    RestoreParams(LoadCheckpoint(path_), other);
    FAIL() << "expected a mismatch";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("checkpoint/config mismatch"),
              std::string::npos);
  }
}

TEST_F(CheckpointTest, CorruptFileIsRejected) {
  std::ofstream(path_) << "not a checkpoint";
  EXPECT_THROW(LoadCheckpoint(path_), Error);
}

}  // namespace
}  // namespace docgraph
