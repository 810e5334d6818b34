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

#ifndef DOCGRAPH_CONFIG_H_
#define DOCGRAPH_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "docgraph/features.h"
#include "docgraph/model.h"
#include "docgraph/training.h"

namespace docgraph {

// Everything a subcommand needs besides file arguments.
//
// File grammar (one statement per line):
//   # comment                      ignored, as is anything after " #"
//   [section]                      prefixes following keys with "section."
//   key = value                    value: number, true/false, bare word or
//                                  "double-quoted string"
//
// Keys:
//   data.schema          funsd | rvl
//   data.text_encoder    hashing | path to a word2vec text table
//   data.angle_binning   centered | floor
//   model.ip_dim, model.ep_inner, model.gnn_layers, model.threshold,
//   model.scale, model.bins, model.dropout, model.use_geometric,
//   model.use_textual, model.use_visual, model.text_dim, model.visual_dim,
//   model.gnn_variant (sum | concat), model.node_head
//   train.lr, train.weight_decay, train.epochs, train.seed,
//   train.edge_weighting (inverse_frequency | uniform), train.patience,
//   train.selection_metric, train.val_fraction, train.folds
//   run.name, run.dir
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  std::string text_encoder = "hashing";
  AngleBinning angle_binning = AngleBinning::kCentered;
  std::string run_name = "default";
  std::string run_dir = "runs";

  void Validate() const;
  FeatureOptions Features() const;
  std::filesystem::path RunPath() const { return std::filesystem::path(run_dir) / run_name; }
};

// Ordered "section.key" -> raw value. Throws with the line number on
// malformed input or a repeated key.
std::vector<std::pair<std::string, std::string>> ParseConfigText(
    const std::string& text);

// Applies one "section.key" = value; unknown keys and bad values throw.
void SetConfigValue(RunConfig& config, const std::string& key,
                    const std::string& value);

// File values first, then "key=value" overrides in order.
RunConfig LoadConfig(const std::filesystem::path& path,
                     const std::vector<std::string>& overrides = {});
RunConfig ConfigFromText(const std::string& text,
                         const std::vector<std::string>& overrides = {});

// Canonical text listing every key; ConfigFromText(snapshot) reproduces the
// configuration exactly.
std::string ConfigSnapshot(const RunConfig& config);

// Throws "checkpoint/config mismatch: ..." when the architecture or feature
// settings in `snapshot` differ from `config`.
void CheckCheckpointCompatible(const std::string& snapshot,
                               const RunConfig& config);

TextEncoder MakeTextEncoder(const RunConfig& config);

}  // namespace docgraph

#endif  // DOCGRAPH_CONFIG_H_
