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

#ifndef DOCGRAPH_DOC_MODEL_H_
#define DOCGRAPH_DOC_MODEL_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docgraph/common.h"

namespace docgraph {

// Axis-aligned box in page pixels. Origin is top-left, y grows downward.
struct BoundingBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  // Validating constructor: finite, non-negative, x0 <= x1, y0 <= y1.
  static BoundingBox Make(double x0, double y0, double x1, double y1);

  double Width() const { return x1 - x0; }
  double Height() const { return y1 - y0; }
  double Area() const { return Width() * Height(); }
  double CenterX() const { return 0.5 * (x0 + x1); }
  double CenterY() const { return 0.5 * (y0 + y1); }
  bool ContainsPoint(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
  // Smallest box enclosing both.
  BoundingBox Union(const BoundingBox& other) const;
  double IntersectionArea(const BoundingBox& other) const;

  bool operator==(const BoundingBox&) const = default;
};

// Throws Error when the box violates the invariants above.
void ValidateBox(const BoundingBox& box);

struct Page {
  double width = 0;
  double height = 0;
  std::string doc_id;

  static Page Make(double width, double height, std::string doc_id);
  bool operator==(const Page&) const = default;
};

// Per-node modality vectors, kept separate until the input projector.
struct FeatureBundle {
  std::vector<double> geometric;  // length 4, entries in [0, 1]
  std::vector<double> textual;
  std::optional<std::vector<double>> visual;

  bool operator==(const FeatureBundle&) const = default;
};

struct EdgeFeatures {
  double distance = 0;        // normalized min-box distance in [0, 1]
  int angle_bin = 0;          // in [0, bins)
  std::vector<double> polar;  // distance followed by one-hot(angle_bin)
  bool coincident_centers = false;

  bool operator==(const EdgeFeatures&) const = default;
};

struct DocNode {
  int id = 0;
  BoundingBox box;
  std::string text;
  std::optional<int> gt_class;
  std::map<std::string, std::vector<double>> external_features;
  std::optional<FeatureBundle> features;

  bool operator==(const DocNode&) const = default;
};

struct DocEdge {
  int src = 0;
  int dst = 0;
  std::optional<int> gt_class;
  std::optional<EdgeFeatures> features;

  bool operator==(const DocEdge&) const = default;
};

struct DocumentGraph {
  Page page;
  std::vector<DocNode> nodes;
  std::vector<DocEdge> edges;
  bool directed = true;
  // Ground-truth table areas, used only by the table-detection evaluation.
  std::vector<BoundingBox> gt_tables;

  bool operator==(const DocumentGraph&) const = default;
};

// Builds the fully-connected graph over `nodes`: every ordered pair when
// directed, every pair with src < dst otherwise. Node ids must be 0..n-1.
DocumentGraph NewDocumentGraph(Page page, std::vector<DocNode> nodes,
                               bool directed);

// Named class vocabularies defining one task.
struct TaskSchema {
  // Edge class "none" always sits at this index.
  static constexpr int kNoneEdgeClass = 0;

  std::string name;
  std::vector<std::string> node_classes;
  std::vector<std::string> edge_classes;
  bool directed = true;
  bool use_node_head = true;
  // How link endpoints are read from annotation files.
  std::string link_convention;

  void Validate() const;

  // Index lookups return nullopt for unknown names.
  std::optional<int> FindNodeClass(const std::string& name) const;
  std::optional<int> FindEdgeClass(const std::string& name) const;
  int NodeClass(const std::string& name) const;  // throws on unknown
  int EdgeClass(const std::string& name) const;  // throws on unknown

  // Fallback class for unmatched detections.
  int OtherNodeClass() const { return NodeClass("other"); }
  // First edge class that is not "none".
  int PositiveEdgeClass() const;
  std::optional<int> TableEdgeClass() const { return FindEdgeClass("table"); }

  bool operator==(const TaskSchema&) const = default;
};

// Form understanding: question/answer/header/other, directed key-value links
// read as src = key (question), dst = value (answer).
TaskSchema FunsdSchema();
// Invoice layout: six region classes, undirected "table" links.
TaskSchema RvlSchema();
// "funsd" or "rvl"; throws Error otherwise.
TaskSchema SchemaByName(const std::string& name);

}  // namespace docgraph

#endif  // DOCGRAPH_DOC_MODEL_H_
