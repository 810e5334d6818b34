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

#include "docgraph/pipeline.h"

#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "docgraph/graph_builder.h"

namespace docgraph {

using nlohmann::json;

std::vector<RawAnnotation> DropEmptyDocuments(std::vector<RawAnnotation> docs) {
  std::vector<RawAnnotation> kept;
  kept.reserve(docs.size());
  for (RawAnnotation& d : docs) {
    if (d.entities.empty()) {
      spdlog::warn("document '{}' has no entities and is excluded", d.doc_id);
      continue;
    }
    kept.push_back(std::move(d));
  }
  return kept;
}

std::vector<DocumentGraph> LoadGraphs(const std::filesystem::path& path,
                                      const RunConfig& config) {
  const json j = ReadJsonFile(path);
  const TaskSchema& schema = config.model.schema;
  if (j.is_object() && j.contains("graphs")) {
    return LoadGraphCache(path, schema);
  }
  std::vector<RawAnnotation> docs = DropEmptyDocuments(ParseDataset(j, schema));
  return BuildGraphs(docs, schema, MakeTextEncoder(config), config.Features());
}

std::unique_ptr<DocModel> LoadModel(const std::filesystem::path& checkpoint,
                                    const RunConfig& config) {
  Checkpoint ckpt = LoadCheckpoint(checkpoint);
  CheckCheckpointCompatible(ckpt.config_snapshot, config);
  auto model = std::make_unique<DocModel>(config.model, 0);
  RestoreParams(ckpt, model->params());
  return model;
}

json PredictionToJson(const DocPrediction& p, const TaskSchema& schema) {
  json nodes = json::array();
  for (size_t i = 0; i < p.node_class.size(); ++i) {
    nodes.push_back({{"id", i},
                     {"class", schema.node_classes.at(p.node_class[i])},
                     {"probs", p.node_probs[i]}});
  }
  json edges = json::array();
  for (size_t e = 0; e < p.edge_class.size(); ++e) {
    edges.push_back({{"src", p.edge_src[e]},
                     {"dst", p.edge_dst[e]},
                     {"class", schema.edge_classes.at(p.edge_class[e])},
                     {"probs", p.edge_probs[e]}});
  }
  json out = {{"doc_id", p.doc_id}, {"nodes", nodes}, {"edges", edges}};
  if (p.loss) out["loss"] = *p.loss;
  return out;
}

DocPrediction PredictionFromJson(const json& j, const TaskSchema& schema) {
  DocPrediction p;
  try {
    p.doc_id = j.at("doc_id").get<std::string>();
    if (j.contains("loss")) p.loss = j["loss"].get<double>();
    for (const json& n : j.at("nodes")) {
      if (n.at("id").get<size_t>() != p.node_class.size()) {
        throw Error("node ids must be 0..n-1 in order");
      }
      p.node_class.push_back(schema.NodeClass(n.at("class").get<std::string>()));
      p.node_probs.push_back(n.at("probs").get<std::vector<double>>());
    }
    for (const json& e : j.at("edges")) {
      p.edge_src.push_back(e.at("src").get<uint32_t>());
      p.edge_dst.push_back(e.at("dst").get<uint32_t>());
      p.edge_class.push_back(schema.EdgeClass(e.at("class").get<std::string>()));
      p.edge_probs.push_back(e.at("probs").get<std::vector<double>>());
      if (p.edge_probs.back().size() != schema.edge_classes.size()) {
        throw Error("edge probs length differs from the edge class count");
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed prediction: ") + e.what());
  }
  return p;
}

void WritePredictions(const std::filesystem::path& path,
                      const std::vector<DocPrediction>& predictions,
                      const TaskSchema& schema) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const DocPrediction& p : predictions) {
    out << PredictionToJson(p, schema).dump() << '\n';
  }
}

std::vector<DocPrediction> LoadPredictions(const std::filesystem::path& path,
                                           const TaskSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<DocPrediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(PredictionFromJson(json::parse(line), schema));
    } catch (const std::exception& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " +
                  e.what());
    }
  }
  return out;
}

namespace {

RenderLayers Layers(const DocumentGraph& graph, const TaskSchema& schema,
                    std::vector<int> node_class,
                    const std::vector<int>& edge_class) {
  RenderLayers layers;
  layers.node_class = std::move(node_class);
  const std::optional<int> table = schema.TableEdgeClass();
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    const int c = edge_class[e];
    if (c == TaskSchema::kNoneEdgeClass || (table && c == *table)) continue;
    layers.links.emplace_back(graph.edges[e].src, graph.edges[e].dst);
  }
  if (table) layers.tables = ExtractTableRegions(graph, edge_class, *table);
  return layers;
}

}  // namespace

RenderLayers GroundTruthLayers(const DocumentGraph& graph,
                               const TaskSchema& schema) {
  std::vector<int> nodes, edges;
  for (const DocNode& n : graph.nodes) nodes.push_back(n.gt_class.value_or(-1));
  for (const DocEdge& e : graph.edges) {
    edges.push_back(e.gt_class.value_or(TaskSchema::kNoneEdgeClass));
  }
  return Layers(graph, schema, nodes, edges);
}

RenderLayers PredictionLayers(const DocumentGraph& graph,
                              const DocPrediction& p,
                              const TaskSchema& schema) {
  if (p.edge_class.size() != graph.edges.size()) {
    throw Error("prediction for '" + p.doc_id +
                "' does not match the document's edges");
  }
  std::vector<int> nodes = p.node_class;
  if (nodes.empty()) nodes.assign(graph.nodes.size(), -1);
  return Layers(graph, schema, nodes, p.edge_class);
}

}  // namespace docgraph
