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

#ifndef DOCGRAPH_INGEST_H_
#define DOCGRAPH_INGEST_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docgraph/doc_model.h"
#include "json.hpp"

namespace docgraph {

struct RawEntity {
  BoundingBox box;
  std::string text;
  std::optional<int> cls;  // node-class index; absent when unlabeled
  std::map<std::string, std::vector<double>> external;

  bool operator==(const RawEntity&) const = default;
};

struct RawLink {
  int src = 0;
  int dst = 0;
  int cls = 0;  // edge-class index

  bool operator==(const RawLink&) const = default;
};

// Labeled page area (e.g. an invoice "table" block). Class is a node class.
struct RawRegion {
  BoundingBox box;
  int cls = 0;

  bool operator==(const RawRegion&) const = default;
};

struct RawAnnotation {
  std::string doc_id;
  double width = 0;
  double height = 0;
  std::vector<RawEntity> entities;
  std::vector<RawLink> links;
  std::vector<RawRegion> regions;

  bool operator==(const RawAnnotation&) const = default;
};

// Dataset file:
//   {"documents": [{"id", "width", "height",
//                   "entities": [{"box": [x0,y0,x1,y1], "text", "class"?,
//                                 "visual"?: [..]}],
//                   "links": [{"src", "dst", "class"}],
//                   "regions"?: [{"box": [..], "class"}]}]}
// Class names are resolved against `schema`; errors name the document.
std::vector<RawAnnotation> LoadDataset(const std::filesystem::path& path,
                                       const TaskSchema& schema);
std::vector<RawAnnotation> ParseDataset(const nlohmann::json& json,
                                        const TaskSchema& schema);
nlohmann::json DatasetToJson(const std::vector<RawAnnotation>& docs,
                             const TaskSchema& schema);
void WriteDataset(const std::filesystem::path& path,
                  const std::vector<RawAnnotation>& docs,
                  const TaskSchema& schema);

struct Detections {
  std::string doc_id;
  std::vector<BoundingBox> boxes;
};

// Accepts one {"id", "boxes"} object, an array of them, or
// {"detections": [...]}.
std::vector<Detections> LoadDetections(const std::filesystem::path& path);

struct ProjectionResult {
  RawAnnotation annotation;
  bool empty_detections = false;
  int matched = 0;
  int false_positives = 0;
  int dropped_links = 0;
};

// Re-labels detector output with ground truth. Pairs are matched greedily by
// descending IoU (ties by detection then entity index); a pair qualifies when
// IoU > iou_threshold or the boxes are identical. Matched detections keep
// their own box and take the entity's class, text and external features;
// unmatched ones become class "other" with empty text. A link survives only
// when both endpoints were matched.
ProjectionResult ProjectGroundTruth(const std::vector<BoundingBox>& detections,
                                    const RawAnnotation& gt,
                                    double iou_threshold,
                                    const TaskSchema& schema);

struct FoldPlan {
  int k = 0;
  std::map<std::string, int> assignments;
  // Set for a single fixed partition; assignments are then
  // 0 = train, 1 = val, 2 = test.
  std::optional<std::array<int, 3>> fixed_split;
  // Shuffled document order; split lists follow it.
  std::vector<std::string> order;
};

// k folds of sizes floor(n/k) or ceil(n/k) after a seeded shuffle.
FoldPlan MakeFolds(const std::vector<std::string>& docs, int k, uint64_t seed);
FoldPlan MakeFixedSplit(const std::vector<std::string>& docs,
                        std::array<int, 3> train_val_test, uint64_t seed);

struct FoldSplit {
  std::vector<std::string> train, val, test;
};

// k-fold: test = fold `fold`; validation = the first
// ceil(val_fraction * rest) of the remaining documents in plan order.
FoldSplit SplitForFold(const FoldPlan& plan, int fold, double val_fraction);

// Graph cache (output of `build`): every field of DocumentGraph.
nlohmann::json GraphToJson(const DocumentGraph& graph);
DocumentGraph GraphFromJson(const nlohmann::json& json);
void SaveGraphCache(const std::filesystem::path& path,
                    const std::vector<DocumentGraph>& graphs,
                    const TaskSchema& schema);
std::vector<DocumentGraph> LoadGraphCache(const std::filesystem::path& path,
                                          const TaskSchema& schema);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& json);

}  // namespace docgraph

#endif  // DOCGRAPH_INGEST_H_
