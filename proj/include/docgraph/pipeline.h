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

#ifndef DOCGRAPH_PIPELINE_H_
#define DOCGRAPH_PIPELINE_H_

#include <filesystem>
#include <memory>
#include <vector>

#include "docgraph/config.h"
#include "docgraph/render.h"
#include "docgraph/training.h"

namespace docgraph {

// Removes documents without entities, logging a warning for each.
std::vector<RawAnnotation> DropEmptyDocuments(std::vector<RawAnnotation> docs);

// Reads either a graph cache written by `build` or a dataset file, which is
// then built into graphs with the config's encoder and feature options.
std::vector<DocumentGraph> LoadGraphs(const std::filesystem::path& path,
                                      const RunConfig& config);

// Model from a checkpoint whose snapshot must agree with `config`.
std::unique_ptr<DocModel> LoadModel(const std::filesystem::path& checkpoint,
                                    const RunConfig& config);

// Predictions file: JSON Lines, one document per line:
//   {"doc_id", "nodes": [{"id", "class", "probs"}],
//    "edges": [{"src", "dst", "class", "probs"}], "loss"?}
// "nodes" is empty when the schema has no node head.
nlohmann::json PredictionToJson(const DocPrediction& p,
                                const TaskSchema& schema);
DocPrediction PredictionFromJson(const nlohmann::json& j,
                                 const TaskSchema& schema);
void WritePredictions(const std::filesystem::path& path,
                      const std::vector<DocPrediction>& predictions,
                      const TaskSchema& schema);
std::vector<DocPrediction> LoadPredictions(const std::filesystem::path& path,
                                           const TaskSchema& schema);

// Overlays: ground-truth classes and links, or predicted ones. Edges of a
// "table" class become table rectangles; other non-"none" edges are arrows.
RenderLayers GroundTruthLayers(const DocumentGraph& graph,
                               const TaskSchema& schema);
RenderLayers PredictionLayers(const DocumentGraph& graph,
                              const DocPrediction& prediction,
                              const TaskSchema& schema);

}  // namespace docgraph

#endif  // DOCGRAPH_PIPELINE_H_
