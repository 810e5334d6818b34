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

#include "docgraph/doc_model.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace docgraph {

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

BoundingBox BoundingBox::Make(double x0, double y0, double x1, double y1) {
  BoundingBox box{x0, y0, x1, y1};
  ValidateBox(box);
  return box;
}

BoundingBox BoundingBox::Union(const BoundingBox& other) const {
  return {std::min(x0, other.x0), std::min(y0, other.y0),
          std::max(x1, other.x1), std::max(y1, other.y1)};
}

double BoundingBox::IntersectionArea(const BoundingBox& other) const {
  const double w = std::min(x1, other.x1) - std::max(x0, other.x0);
  const double h = std::min(y1, other.y1) - std::max(y0, other.y0);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

void ValidateBox(const BoundingBox& b) {
  for (double v : {b.x0, b.y0, b.x1, b.y1}) {
    if (!std::isfinite(v) || v < 0) {
      throw Error("bounding box coordinates must be finite and >= 0");
    }
  }
  if (b.x0 > b.x1 || b.y0 > b.y1) {
    throw Error("bounding box must satisfy x0 <= x1 and y0 <= y1");
  }
}

Page Page::Make(double width, double height, std::string doc_id) {
  if (!(width > 0) || !(height > 0) || !std::isfinite(width) ||
      !std::isfinite(height)) {
    throw Error("page '" + doc_id + "' must have positive width and height");
  }
  return Page{width, height, std::move(doc_id)};
}

DocumentGraph NewDocumentGraph(Page page, std::vector<DocNode> nodes,
                               bool directed) {
  if (nodes.empty()) {
    throw Error("document '" + page.doc_id + "' has no nodes");
  }
  std::set<int> seen;
  for (const DocNode& node : nodes) {
    if (!seen.insert(node.id).second) {
      throw Error("document '" + page.doc_id + "' has duplicate node id " +
                  std::to_string(node.id));
    }
  }
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    if (nodes[i].id != i) {
      throw Error("document '" + page.doc_id +
                  "': node ids must be 0..n-1 in order");
    }
    ValidateBox(nodes[i].box);
  }

  DocumentGraph graph;
  graph.page = std::move(page);
  graph.directed = directed;
  graph.edges.reserve(directed ? n * (n - 1) : n * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      graph.edges.push_back(DocEdge{i, j, std::nullopt, std::nullopt});
    }
  }
  graph.nodes = std::move(nodes);
  return graph;
}

void TaskSchema::Validate() const {
  if (edge_classes.empty() || edge_classes[kNoneEdgeClass] != "none") {
    throw Error("schema '" + name + "': edge class 0 must be \"none\"");
  }
  if (edge_classes.size() < 2) {
    throw Error("schema '" + name + "' needs at least one link class");
  }
  if (use_node_head && node_classes.empty()) {
    throw Error("schema '" + name + "' enables the node head without classes");
  }
  auto unique = [](const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.end()).size() == v.size();
  };
  if (!unique(node_classes) || !unique(edge_classes)) {
    throw Error("schema '" + name + "' has duplicate class names");
  }
}

std::optional<int> TaskSchema::FindNodeClass(const std::string& n) const {
  auto it = std::find(node_classes.begin(), node_classes.end(), n);
  if (it == node_classes.end()) return std::nullopt;
  return static_cast<int>(it - node_classes.begin());
}

std::optional<int> TaskSchema::FindEdgeClass(const std::string& n) const {
  auto it = std::find(edge_classes.begin(), edge_classes.end(), n);
  if (it == edge_classes.end()) return std::nullopt;
  return static_cast<int>(it - edge_classes.begin());
}

int TaskSchema::NodeClass(const std::string& n) const {
  auto idx = FindNodeClass(n);
  if (!idx) throw Error("schema '" + name + "' has no node class '" + n + "'");
  return *idx;
}

int TaskSchema::EdgeClass(const std::string& n) const {
  auto idx = FindEdgeClass(n);
  if (!idx) throw Error("schema '" + name + "' has no edge class '" + n + "'");
  return *idx;
}

int TaskSchema::PositiveEdgeClass() const {
  for (int i = 0; i < static_cast<int>(edge_classes.size()); ++i) {
    if (i != kNoneEdgeClass) return i;
  }
  throw Error("schema '" + name + "' has no link class");
}

TaskSchema FunsdSchema() {
  TaskSchema s;
  s.name = "funsd";
  s.node_classes = {"question", "answer", "header", "other"};
  s.edge_classes = {"none", "key-value"};
  s.directed = true;
  s.use_node_head = true;
  s.link_convention = "src=key(question) dst=value(answer)";
  return s;
}

TaskSchema RvlSchema() {
  TaskSchema s;
  s.name = "rvl";
  s.node_classes = {"supplier", "invoice_info", "receiver",
                    "table",    "total",        "other"};
  s.edge_classes = {"none", "table"};
  s.directed = false;
  s.use_node_head = true;
  s.link_convention = "undirected, canonical src < dst";
  return s;
}

TaskSchema SchemaByName(const std::string& name) {
  if (name == "funsd") return FunsdSchema();
  if (name == "rvl") return RvlSchema();
  throw Error("unknown schema '" + name + "' (expected funsd or rvl)");
}

}  // namespace docgraph
