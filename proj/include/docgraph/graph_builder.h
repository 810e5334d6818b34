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

#ifndef DOCGRAPH_GRAPH_BUILDER_H_
#define DOCGRAPH_GRAPH_BUILDER_H_

#include <optional>
#include <vector>

#include "docgraph/features.h"
#include "docgraph/ingest.h"

namespace docgraph {

// Region whose box contains the center of `box`. When several do, the one
// overlapping `box` most wins (earliest on a tie).
std::optional<size_t> AssignRegion(const BoundingBox& box,
                                   const std::vector<RawRegion>& regions);

// Fully-connected, labeled, featurized graph for one annotation:
//  - nodes follow annotation order; unlabeled entities take the class of
//    their region, if any
//  - edges carry the annotation link class (canonicalized for undirected
//    schemas), else "none"
//  - with a "table" edge class, nodes whose centers fall in the same "table"
//    region are linked as "table"
DocumentGraph BuildGraph(const RawAnnotation& ann, const TaskSchema& schema,
                         const TextEncoder& encoder,
                         const FeatureOptions& options);

std::vector<DocumentGraph> BuildGraphs(const std::vector<RawAnnotation>& anns,
                                       const TaskSchema& schema,
                                       const TextEncoder& encoder,
                                       const FeatureOptions& options);

}  // namespace docgraph

#endif  // DOCGRAPH_GRAPH_BUILDER_H_
