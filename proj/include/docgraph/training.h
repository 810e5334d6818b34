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

#ifndef DOCGRAPH_TRAINING_H_
#define DOCGRAPH_TRAINING_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docgraph/ingest.h"
#include "docgraph/metrics.h"
#include "docgraph/model.h"
#include "docgraph/optim.h"

namespace docgraph {

enum class EdgeWeighting { kUniform, kInverseFrequency };

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int epochs = 30;
  uint64_t seed = 0;
  EdgeWeighting edge_weighting = EdgeWeighting::kInverseFrequency;
  int patience = 10;  // epochs without validation improvement; 0 disables
  // "kv_f1" (F1 of the first non-"none" edge class), "node_acc", "loss",
  // or "auto" (node_acc for rvl, kv_f1 otherwise).
  std::string selection_metric = "auto";
  double val_fraction = 0.1;
  int folds = 10;

  void Validate() const;
};

std::string ResolveSelectionMetric(const TrainConfig& config,
                                   const TaskSchema& schema);

struct JointLoss {
  Var total;
  double node = 0;  // 0 without a node head
  double edge = 0;
};

// L = Ln + Le, each a (class-weighted) mean cross-entropy. Without node
// logits L = Le. Throws on an empty edge set.
JointLoss ComputeJointLoss(Tape& tape, std::optional<Var> node_logits,
                           std::span<const int> node_gt, Var edge_logits,
                           std::span<const int> edge_gt,
                           std::span<const Real> edge_weights = {},
                           std::span<const Real> node_weights = {});

// Uniform: all ones. Inverse frequency: N / (C * n_c) over the given graphs'
// edge labels (1 for classes that never occur).
std::vector<Real> EdgeClassWeights(const std::vector<GraphInputs>& graphs,
                                   int num_classes, EdgeWeighting mode);

struct DocPrediction {
  std::string doc_id;
  std::vector<int> node_class;
  std::vector<std::vector<double>> node_probs;
  std::vector<uint32_t> edge_src, edge_dst;
  std::vector<int> edge_class;
  std::vector<std::vector<double>> edge_probs;
  std::optional<double> loss;  // unweighted joint loss when labeled
};

DocPrediction Predict(const DocModel& model, const GraphInputs& inputs);
// Documents are processed in parallel; output order follows input order.
std::vector<DocPrediction> PredictAll(const DocModel& model,
                                      const std::vector<GraphInputs>& inputs);

// Pools node and edge decisions over all documents. Edge AUC-PR uses the
// probability of the schema's first link class. Table detection is scored
// when the schema has a "table" edge class.
EvalReport EvaluatePredictions(const std::vector<DocPrediction>& predictions,
                               const std::vector<const DocumentGraph*>& graphs,
                               const TaskSchema& schema,
                               double table_iou_threshold = 0.5);

EvalReport Evaluate(const DocModel& model,
                    const std::vector<const DocumentGraph*>& graphs);

double SelectionValue(const EvalReport& report, const std::string& metric);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double train_node_loss = 0;
  double train_edge_loss = 0;
  std::optional<double> val_metric;
};

struct FoldResult {
  int fold = 0;
  std::string selection_metric;
  int best_epoch = 0;
  std::optional<double> best_val_metric;
  std::optional<EvalReport> val;
  EvalReport test;
  std::vector<EpochRecord> history;
  std::unique_ptr<DocModel> model;  // holds the selected parameters
};

using EpochCallback = std::function<void(int fold, const EpochRecord&)>;

// Full-batch per document, documents reshuffled each epoch. After every
// epoch the model is scored on `val`; the best-scoring parameters are kept
// and evaluated once on `test`. Without validation documents the last epoch
// is kept.
FoldResult TrainFold(const std::vector<const DocumentGraph*>& train,
                     const std::vector<const DocumentGraph*>& val,
                     const std::vector<const DocumentGraph*>& test,
                     const ModelConfig& model_config,
                     const TrainConfig& train_config, int fold,
                     const EpochCallback& on_epoch = nullptr);

struct MetricSummary {
  std::string name;
  double mean = 0;
  double std = 0;  // population standard deviation across folds
};

struct CrossValidationResult {
  std::vector<FoldResult> folds;
  std::vector<MetricSummary> test_summary;
};

struct RunOutput {
  std::filesystem::path dir;    // runs/<name>
  std::string config_snapshot;  // written next to every checkpoint
};

// Trains every fold of `plan` over `graphs` (matched by doc id). With `out`,
// writes <dir>/fold<k>/{checkpoint.bin, config-snapshot.cfg, metrics.json,
// log.txt} and <dir>/metrics.json.
CrossValidationResult CrossValidate(const std::vector<DocumentGraph>& graphs,
                                    const FoldPlan& plan,
                                    const ModelConfig& model_config,
                                    const TrainConfig& train_config,
                                    const std::optional<RunOutput>& out = std::nullopt,
                                    const EpochCallback& on_epoch = nullptr);

std::vector<MetricSummary> Summarize(const std::vector<const EvalReport*>& reports,
                                     const TaskSchema& schema);

nlohmann::json FoldToJson(const FoldResult& fold, const TaskSchema& schema);
nlohmann::json CrossValidationToJson(const CrossValidationResult& result,
                                     const TaskSchema& schema);

}  // namespace docgraph

#endif  // DOCGRAPH_TRAINING_H_
