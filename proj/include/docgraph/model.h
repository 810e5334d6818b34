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

#ifndef DOCGRAPH_MODEL_H_
#define DOCGRAPH_MODEL_H_

#include <optional>
#include <string>
#include <vector>

#include "docgraph/autodiff.h"
#include "docgraph/doc_model.h"
#include "docgraph/kernels.h"
#include "docgraph/tensor.h"

namespace docgraph {

enum class GnnVariant {
  kSum,     // ReLU(h W_self + h_N W_neigh)
  kConcat,  // ReLU([h, h_N] W)
};

struct ModelConfig {
  TaskSchema schema = FunsdSchema();
  int ip_dim = 300;    // per-modality projection width
  int ep_inner = 300;  // edge predictor hidden width
  int gnn_layers = 1;
  double threshold = 0.9;  // neighbors need normalized distance < threshold
  double scale = 0.1;      // constant factor on the neighbor mean
  int bins = 8;
  double dropout = 0.2;
  bool use_geometric = true;
  bool use_textual = true;
  bool use_visual = false;
  int text_dim = 300;
  int visual_dim = 0;
  GnnVariant gnn_variant = GnnVariant::kSum;

  void Validate() const;
  int NumModalities() const;
  int HiddenDim() const { return NumModalities() * ip_dim; }
  int PolarDim() const { return 1 + bins; }
  // Width of the edge representation fed to the edge predictor.
  int EdgeInputDim() const;
};

// Tensors derived once from a featurized graph. Must outlive any Tape that
// uses them.
struct GraphInputs {
  std::string doc_id;
  size_t num_nodes = 0;
  Tensor geometric;  // n x 4
  Tensor textual;    // n x text_dim
  Tensor visual;     // n x visual_dim (empty when unused)
  std::vector<uint32_t> edge_src, edge_dst;
  Tensor polar;  // |E| x (1 + bins)
  NeighborLists neighbors;
  std::vector<int> node_gt;  // empty when unlabeled
  std::vector<int> edge_gt;  // empty when unlabeled
};

// Neighbor sets for the thresholded scaled mean: j is a neighbor of i when an
// edge j->i exists (either direction for undirected graphs) and its distance
// is below `threshold`; the row scale is scale / |neighbors|.
NeighborLists BuildNeighborLists(size_t num_nodes,
                                 std::span<const uint32_t> src,
                                 std::span<const uint32_t> dst,
                                 std::span<const double> distances,
                                 bool directed, double threshold,
                                 double scale);

GraphInputs MakeGraphInputs(const DocumentGraph& graph,
                            const ModelConfig& config);

struct ForwardOutput {
  Var hidden;
  std::optional<Var> node_logits;
  Var edge_logits;
};

// Input projector, GNN layer(s), node predictor and edge predictor.
class DocModel {
 public:
  DocModel(ModelConfig config, uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // One FC + ReLU per enabled modality to ip_dim, concatenated in the order
  // geometric, textual, visual.
  Var ProjectInputs(Tape& tape, const GraphInputs& in) const;
  Var GnnLayer(Tape& tape, Var h, const NeighborLists& lists, int layer) const;
  Var NodeLogits(Tape& tape, Var h) const;
  // Two-layer edge classifier. The first layer is evaluated per node and
  // gathered per edge, which equals applying it to the explicit edge
  // representation.
  Var EdgeLogits(Tape& tape, Var h, std::optional<Var> node_logits,
                 const GraphInputs& in, bool training, Rng& rng) const;

  // Explicit edge representation
  //   directed:   h_src | h_dst | softmax(src) | softmax(dst) | polar
  //   undirected: (h_src + h_dst) | softmax(src) | softmax(dst) | polar
  // (class blocks omitted without a node head).
  Var EdgeRepresentation(Tape& tape, Var h, std::optional<Var> node_logits,
                         const GraphInputs& in) const;
  // Edge classifier applied to EdgeRepresentation; reference for EdgeLogits.
  Var EdgeLogitsReference(Tape& tape, Var h, std::optional<Var> node_logits,
                          const GraphInputs& in, bool training,
                          Rng& rng) const;

  ForwardOutput Forward(Tape& tape, const GraphInputs& in, bool training,
                        Rng& rng) const;

 private:
  void InitParams();

  ModelConfig config_;
  ParamStore params_;
};

// Number of trainable scalars DocModel(config) allocates.
size_t CountParameters(const ModelConfig& config);

}  // namespace docgraph

#endif  // DOCGRAPH_MODEL_H_
