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

#ifndef DOCGRAPH_METRICS_H_
#define DOCGRAPH_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "docgraph/doc_model.h"
#include "json.hpp"

namespace docgraph {

struct ClassScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int support = 0;     // ground-truth count
  int predicted = 0;   // predicted count
  bool absent = false; // class appears in neither gt nor pred
};

struct ClassificationReport {
  std::vector<ClassScores> per_class;
  double micro_f1 = 0;
  double macro_f1 = 0;  // over classes present in gt or pred
  double accuracy = 0;
  std::vector<std::vector<int>> confusion;  // [gt][pred]
};

ClassificationReport ComputeClassificationReport(std::span<const int> pred,
                                                 std::span<const int> gt,
                                                 int num_classes);

// Area under the precision-recall curve by step-wise summation
// sum_k (R_k - R_{k-1}) * P_k over a descending-score sweep, where items with
// equal scores enter the sweep together.
double AucPr(std::span<const double> scores, const std::vector<bool>& positive);

// Intersection over union; 0 when the union is empty.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Connected components of the undirected subgraph of edges predicted as
// `table_class`; one enclosing rectangle per component with >= 2 nodes.
// Rectangles are ordered by the smallest node index of their component.
std::vector<BoundingBox> ExtractTableRegions(const DocumentGraph& graph,
                                             std::span<const int> edge_pred,
                                             int table_class);

struct DetectionScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double iou_threshold = 0.5;
  bool both_empty = false;

  static DetectionScores FromCounts(int tp, int fp, int fn,
                                    double iou_threshold);
};

// Greedy one-to-one matching by descending IoU; a match needs
// IoU > iou_threshold.
DetectionScores DetectionReport(const std::vector<BoundingBox>& pred,
                                const std::vector<BoundingBox>& gt,
                                double iou_threshold);

struct EvalReport {
  std::optional<ClassificationReport> nodes;
  ClassificationReport edges;
  int positive_edge_class = 1;
  std::optional<double> auc_pr;  // for positive_edge_class
  std::optional<DetectionScores> tables;
  double loss = 0;

  double PositiveEdgeF1() const {
    return edges.per_class.at(positive_edge_class).f1;
  }
  double NodeAccuracy() const { return nodes ? nodes->accuracy : 0.0; }
};

nlohmann::json ReportToJson(const ClassificationReport& report,
                            const std::vector<std::string>& class_names);
nlohmann::json EvalReportToJson(const EvalReport& report,
                                const TaskSchema& schema);
// Flat name -> value view used for fold summaries and model selection,
// e.g. "node_accuracy", "edge_f1.key-value", "auc_pr", "table_f1".
std::vector<std::pair<std::string, double>> FlattenReport(
    const EvalReport& report, const TaskSchema& schema);

}  // namespace docgraph

#endif  // DOCGRAPH_METRICS_H_
