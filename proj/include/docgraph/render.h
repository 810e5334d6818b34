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

#ifndef DOCGRAPH_RENDER_H_
#define DOCGRAPH_RENDER_H_

#include <string>
#include <utility>
#include <vector>

#include "docgraph/doc_model.h"

namespace docgraph {

// Fill color per node class of `schema` (gray for "other").
std::string ClassColor(const TaskSchema& schema, int node_class);

struct RenderLayers {
  std::vector<int> node_class;                // per node; -1 draws no fill
  std::vector<std::pair<int, int>> links;     // src -> dst arrows
  std::vector<BoundingBox> tables;            // outlined rectangles
};

// SVG overlay: one class-colored box per node, one arrow per link with a green
// dot on its source and a red dot on its destination, table rectangles, and a
// legend of the schema's node classes.
std::string RenderSvg(const DocumentGraph& graph, const TaskSchema& schema,
                      const RenderLayers& layers);

}  // namespace docgraph

#endif  // DOCGRAPH_RENDER_H_
