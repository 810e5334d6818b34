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

#include "docgraph/graph_builder.h"

#include <map>
#include <utility>

namespace docgraph {

std::optional<size_t> AssignRegion(const BoundingBox& box,
                                   const std::vector<RawRegion>& regions) {
  std::optional<size_t> best;
  double best_overlap = -1;
  for (size_t r = 0; r < regions.size(); ++r) {
    if (!regions[r].box.ContainsPoint(box.CenterX(), box.CenterY())) continue;
    const double overlap = regions[r].box.IntersectionArea(box);
    if (overlap > best_overlap) {
      best = r;
      best_overlap = overlap;
    }
  }
  return best;
}

DocumentGraph BuildGraph(const RawAnnotation& ann, const TaskSchema& schema,
                         const TextEncoder& encoder,
                         const FeatureOptions& options) {
  const int n = static_cast<int>(ann.entities.size());
  std::vector<std::optional<size_t>> region_of(n);
  std::vector<DocNode> nodes;
  nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    const RawEntity& e = ann.entities[i];
    DocNode node;
    node.id = i;
    node.box = e.box;
    node.text = e.text;
    node.gt_class = e.cls;
    node.external_features = e.external;
    region_of[i] = AssignRegion(e.box, ann.regions);
    if (!node.gt_class && !ann.regions.empty()) {
      node.gt_class = region_of[i] ? ann.regions[*region_of[i]].cls
                                   : schema.OtherNodeClass();
    }
    nodes.push_back(std::move(node));
  }

  DocumentGraph graph = NewDocumentGraph(
      Page::Make(ann.width, ann.height, ann.doc_id), std::move(nodes),
      schema.directed);

  auto key = [&](int s, int d) {
    if (!schema.directed && s > d) std::swap(s, d);
    return std::pair<int, int>(s, d);
  };
  std::map<std::pair<int, int>, int> labels;
  for (const RawLink& l : ann.links) labels[key(l.src, l.dst)] = l.cls;

  const std::optional<int> table_edge = schema.TableEdgeClass();
  const std::optional<int> table_node = schema.FindNodeClass("table");
  if (table_edge && table_node) {
    for (const RawRegion& r : ann.regions) {
      if (r.cls != *table_node) continue;
      graph.gt_tables.push_back(r.box);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (region_of[i] && region_of[i] == region_of[j] &&
            ann.regions[*region_of[i]].cls == *table_node) {
          labels[key(i, j)] = *table_edge;
          if (schema.directed) labels[key(j, i)] = *table_edge;
        }
      }
    }
  }

  for (DocEdge& e : graph.edges) {
    auto it = labels.find({e.src, e.dst});
    e.gt_class = it == labels.end() ? TaskSchema::kNoneEdgeClass : it->second;
  }
  return FeaturizeGraph(graph, encoder, options);
}

std::vector<DocumentGraph> BuildGraphs(const std::vector<RawAnnotation>& anns,
                                       const TaskSchema& schema,
                                       const TextEncoder& encoder,
                                       const FeatureOptions& options) {
  std::vector<DocumentGraph> graphs(anns.size());
  const long count = static_cast<long>(anns.size());
  // Exceptions cannot leave an OpenMP region; report the lowest index.
  std::vector<std::optional<std::string>> errors(anns.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      graphs[i] = BuildGraph(anns[i], schema, encoder, options);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& err : errors) {
    if (err) throw Error(*err);
  }
  return graphs;
}

}  // namespace docgraph
