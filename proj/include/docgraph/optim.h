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

#ifndef DOCGRAPH_OPTIM_H_
#define DOCGRAPH_OPTIM_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "docgraph/tensor.h"

namespace docgraph {

struct AdamWOptions {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with decoupled weight decay:
//   p <- p * (1 - lr * wd)
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
class AdamW {
 public:
  AdamW(const ParamStore& store, AdamWOptions options);

  // Applies one update from the store's gradients, then clears them.
  // Throws if no backward pass has run since the last step.
  void Step(ParamStore& store);

  int64_t step_count() const { return step_; }
  const AdamWOptions& options() const { return options_; }

 private:
  AdamWOptions options_;
  int64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// Checkpoint container. Byte layout (all integers little-endian):
//   magic "DGCKPT\0\0" (8 bytes), u32 version (= 1)
//   u64 config length, config snapshot bytes (UTF-8 text)
//   u32 parameter count, then per parameter:
//     u32 name length, name bytes, u32 rank, rank x u64 dims,
//     product(dims) x f64 values (IEEE-754 binary64, little-endian)
struct Checkpoint {
  std::string config_snapshot;
  std::vector<std::pair<std::string, Tensor>> params;
};

void SaveCheckpoint(const std::filesystem::path& path, const ParamStore& store,
                    const std::string& config_snapshot);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);
// Copies checkpoint values into `store`. Names and shapes must match exactly.
void RestoreParams(const Checkpoint& checkpoint, ParamStore& store);

}  // namespace docgraph

#endif  // DOCGRAPH_OPTIM_H_
