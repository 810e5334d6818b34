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

#include "docgraph/model.h"

#include <algorithm>
#include <cmath>

namespace docgraph {

void ModelConfig::Validate() const {
  schema.Validate();
  if (!(threshold > 0) || threshold > 1) {
    throw Error("threshold must be in (0, 1]");
  }
  if (!(scale > 0)) throw Error("scale factor must be positive");
  if (gnn_layers < 1) throw Error("at least one GNN layer is required");
  if (ip_dim < 1 || ep_inner < 1) {
    throw Error("projection and edge-predictor widths must be >= 1");
  }
  if (bins < 2) throw Error("angle bins must be >= 2");
  if (dropout < 0 || dropout >= 1) throw Error("dropout must be in [0, 1)");
  if (NumModalities() == 0) throw Error("no input modality enabled");
  if (use_textual && text_dim < 1) throw Error("text_dim must be >= 1");
  if (use_visual && visual_dim < 1) throw Error("visual_dim must be >= 1");
}

int ModelConfig::NumModalities() const {
  return int{use_geometric} + int{use_textual} + int{use_visual};
}

int ModelConfig::EdgeInputDim() const {
  const int h = HiddenDim();
  const int node_block =
      schema.use_node_head ? 2 * static_cast<int>(schema.node_classes.size()) : 0;
  return (schema.directed ? 2 * h : h) + node_block + PolarDim();
}

NeighborLists BuildNeighborLists(size_t num_nodes,
                                 std::span<const uint32_t> src,
                                 std::span<const uint32_t> dst,
                                 std::span<const double> distances,
                                 bool directed, double threshold,
                                 double scale) {
  if (src.size() != dst.size() || src.size() != distances.size()) {
    throw Error("neighbor lists: edge arrays differ in length");
  }
  std::vector<std::vector<uint32_t>> lists(num_nodes);
  for (size_t e = 0; e < src.size(); ++e) {
    if (!(distances[e] < threshold)) continue;
    lists.at(dst[e]).push_back(src[e]);
    if (!directed) lists.at(src[e]).push_back(dst[e]);
  }
  std::vector<Real> row_scale(num_nodes, 0);
  for (size_t i = 0; i < num_nodes; ++i) {
    std::sort(lists[i].begin(), lists[i].end());
    lists[i].erase(std::unique(lists[i].begin(), lists[i].end()), lists[i].end());
    if (!lists[i].empty()) {
      row_scale[i] = static_cast<Real>(scale / static_cast<double>(lists[i].size()));
    }
  }
  return NeighborLists::FromLists(lists, std::move(row_scale));
}

namespace {

Tensor RowsToTensor(const std::vector<const std::vector<double>*>& rows,
                    size_t width, const std::string& what,
                    const std::string& doc_id) {
  Tensor t(rows.size(), width);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]->size() != width) {
      throw Error("document '" + doc_id + "': node " + std::to_string(i) + " " +
                  what + " features have length " +
                  std::to_string(rows[i]->size()) + ", model expects " +
                  std::to_string(width));
    }
    for (size_t c = 0; c < width; ++c) t(i, c) = static_cast<Real>((*rows[i])[c]);
  }
  return t;
}

}  // namespace

GraphInputs MakeGraphInputs(const DocumentGraph& graph,
                            const ModelConfig& config) {
  GraphInputs in;
  in.doc_id = graph.page.doc_id;
  in.num_nodes = graph.nodes.size();
  if (graph.directed != config.schema.directed) {
    throw Error("document '" + in.doc_id +
                "': graph directedness does not match the schema");
  }
  std::vector<const std::vector<double>*> geo, text, vis;
  bool all_node_gt = true;
  for (const DocNode& n : graph.nodes) {
    if (!n.features) {
      throw Error("document '" + in.doc_id + "': node " + std::to_string(n.id) +
                  " is not featurized");
    }
    geo.push_back(&n.features->geometric);
    text.push_back(&n.features->textual);
    if (config.use_visual) {
      if (!n.features->visual) {
        throw Error("document '" + in.doc_id + "': node " +
                    std::to_string(n.id) + " lacks the visual modality");
      }
      vis.push_back(&*n.features->visual);
    }
    all_node_gt = all_node_gt && n.gt_class.has_value();
  }
  if (config.use_geometric) in.geometric = RowsToTensor(geo, 4, "geometric", in.doc_id);
  if (config.use_textual) {
    in.textual = RowsToTensor(text, config.text_dim, "textual", in.doc_id);
  }
  if (config.use_visual) {
    in.visual = RowsToTensor(vis, config.visual_dim, "visual", in.doc_id);
  }
  const int num_node_classes = static_cast<int>(config.schema.node_classes.size());
  if (all_node_gt) {
    for (const DocNode& n : graph.nodes) {
      if (*n.gt_class < 0 || *n.gt_class >= num_node_classes) {
        throw Error("document '" + in.doc_id + "': node class out of range");
      }
      in.node_gt.push_back(*n.gt_class);
    }
  }

  const size_t num_edges = graph.edges.size();
  const int polar_dim = config.PolarDim();
  in.polar = Tensor(num_edges, polar_dim);
  std::vector<double> distances(num_edges);
  bool all_edge_gt = true;
  for (size_t e = 0; e < num_edges; ++e) {
    const DocEdge& edge = graph.edges[e];
    if (!edge.features) {
      throw Error("document '" + in.doc_id + "': edge is not featurized");
    }
    if (static_cast<int>(edge.features->polar.size()) != polar_dim) {
      throw Error("document '" + in.doc_id + "': polar features have length " +
                  std::to_string(edge.features->polar.size()) +
                  ", model expects " + std::to_string(polar_dim));
    }
    in.edge_src.push_back(static_cast<uint32_t>(edge.src));
    in.edge_dst.push_back(static_cast<uint32_t>(edge.dst));
    for (int c = 0; c < polar_dim; ++c) {
      in.polar(e, c) = static_cast<Real>(edge.features->polar[c]);
    }
    distances[e] = edge.features->distance;
    all_edge_gt = all_edge_gt && edge.gt_class.has_value();
  }
  if (all_edge_gt) {
    const int num_edge_classes = static_cast<int>(config.schema.edge_classes.size());
    for (const DocEdge& edge : graph.edges) {
      if (*edge.gt_class < 0 || *edge.gt_class >= num_edge_classes) {
        throw Error("document '" + in.doc_id + "': edge class out of range");
      }
      in.edge_gt.push_back(*edge.gt_class);
    }
  }
  in.neighbors = BuildNeighborLists(in.num_nodes, in.edge_src, in.edge_dst,
                                    distances, graph.directed, config.threshold,
                                    config.scale);
  return in;
}

DocModel::DocModel(ModelConfig config, uint64_t seed)
    : config_(std::move(config)), params_(seed) {
  config_.Validate();
  InitParams();
}

void DocModel::InitParams() {
  const int p = config_.ip_dim;
  const int h = config_.HiddenDim();
  auto kaiming = [](int fan_in) { return std::sqrt(6.0 / fan_in); };
  auto glorot = [](int fan_in, int fan_out) {
    return std::sqrt(6.0 / (fan_in + fan_out));
  };
  auto projector = [&](const std::string& name, int in_dim) {
    params_.AddUniform("proj." + name + ".weight", in_dim, p, kaiming(in_dim));
    params_.AddZeros("proj." + name + ".bias", 1, p);
  };
  if (config_.use_geometric) projector("geometric", 4);
  if (config_.use_textual) projector("textual", config_.text_dim);
  if (config_.use_visual) projector("visual", config_.visual_dim);

  for (int l = 0; l < config_.gnn_layers; ++l) {
    const std::string prefix = "gnn." + std::to_string(l) + ".";
    if (config_.gnn_variant == GnnVariant::kSum) {
      params_.AddUniform(prefix + "w_self", h, h, kaiming(h));
      params_.AddUniform(prefix + "w_neigh", h, h, kaiming(h));
    } else {
      params_.AddUniform(prefix + "weight", 2 * h, h, kaiming(2 * h));
    }
  }

  const int num_node = static_cast<int>(config_.schema.node_classes.size());
  const int num_edge = static_cast<int>(config_.schema.edge_classes.size());
  if (config_.schema.use_node_head) {
    params_.AddUniform("node_head.weight", h, num_node, glorot(h, num_node));
    params_.AddZeros("node_head.bias", 1, num_node);
  }
  const int e_in = config_.EdgeInputDim();
  params_.AddUniform("edge.fc1.weight", e_in, config_.ep_inner, kaiming(e_in));
  params_.AddZeros("edge.fc1.bias", 1, config_.ep_inner);
  params_.AddUniform("edge.fc2.weight", config_.ep_inner, num_edge,
                     glorot(config_.ep_inner, num_edge));
  params_.AddZeros("edge.fc2.bias", 1, num_edge);
}

Var DocModel::ProjectInputs(Tape& tape, const GraphInputs& in) const {
  std::vector<Var> parts;
  auto project = [&](const std::string& name, const Tensor& x) {
    if (x.rows() != in.num_nodes) {
      throw Error("document '" + in.doc_id + "': missing " + name + " modality");
    }
    Var xw = tape.MatMul(tape.Input(x), tape.Parameter("proj." + name + ".weight"));
    parts.push_back(
        tape.Relu(tape.AddRowVector(xw, tape.Parameter("proj." + name + ".bias"))));
  };
  if (config_.use_geometric) project("geometric", in.geometric);
  if (config_.use_textual) project("textual", in.textual);
  if (config_.use_visual) project("visual", in.visual);
  return parts.size() == 1 ? parts[0] : tape.ConcatCols(parts);
}

Var DocModel::GnnLayer(Tape& tape, Var h, const NeighborLists& lists,
                       int layer) const {
  const std::string prefix = "gnn." + std::to_string(layer) + ".";
  Var neigh = tape.Aggregate(h, lists);
  if (config_.gnn_variant == GnnVariant::kConcat) {
    return tape.Relu(tape.MatMul(tape.ConcatCols({h, neigh}),
                                 tape.Parameter(prefix + "weight")));
  }
  Var self_term = tape.MatMul(h, tape.Parameter(prefix + "w_self"));
  Var neigh_term = tape.MatMul(neigh, tape.Parameter(prefix + "w_neigh"));
  return tape.Relu(tape.Add(self_term, neigh_term));
}

Var DocModel::NodeLogits(Tape& tape, Var h) const {
  if (!config_.schema.use_node_head) {
    throw Error("node head is disabled for schema " + config_.schema.name);
  }
  return tape.AddRowVector(tape.MatMul(h, tape.Parameter("node_head.weight")),
                           tape.Parameter("node_head.bias"));
}

namespace {

void CheckNodeLogits(const ModelConfig& config, std::optional<Var> node_logits) {
  if (config.schema.use_node_head && !node_logits) {
    throw Error("edge predictor needs node logits when the node head is on");
  }
  if (!config.schema.use_node_head && node_logits) {
    throw Error("node logits given but the node head is disabled");
  }
}

}  // namespace

Var DocModel::EdgeLogits(Tape& tape, Var h, std::optional<Var> node_logits,
                         const GraphInputs& in, bool training, Rng& rng) const {
  CheckNodeLogits(config_, node_logits);
  const size_t hd = static_cast<size_t>(config_.HiddenDim());
  if (tape.value(h).cols() != hd) {
    throw Error("edge predictor: hidden width " +
                std::to_string(tape.value(h).cols()) + " does not match config " +
                std::to_string(hd));
  }
  Var w1 = tape.Parameter("edge.fc1.weight");
  size_t offset = 0;
  auto take = [&](size_t rows) {
    Var slice = tape.RowSlice(w1, offset, offset + rows);
    offset += rows;
    return slice;
  };
  Var src_part, dst_part;
  if (config_.schema.directed) {
    src_part = tape.MatMul(h, take(hd));
    dst_part = tape.MatMul(h, take(hd));
  } else {
    src_part = tape.MatMul(h, take(hd));
    dst_part = src_part;
  }
  if (node_logits) {
    const size_t c = config_.schema.node_classes.size();
    Var probs = tape.SoftmaxRows(*node_logits);
    src_part = tape.Add(src_part, tape.MatMul(probs, take(c)));
    dst_part = tape.Add(dst_part, tape.MatMul(probs, take(c)));
  }
  Var polar_part = tape.MatMul(tape.Input(in.polar), take(config_.PolarDim()));
  Var pre = tape.Add(tape.Add(tape.GatherRows(src_part, in.edge_src),
                              tape.GatherRows(dst_part, in.edge_dst)),
                     polar_part);
  pre = tape.AddRowVector(pre, tape.Parameter("edge.fc1.bias"));
  Var hidden = tape.Dropout(tape.Relu(pre), config_.dropout, training, rng);
  return tape.AddRowVector(tape.MatMul(hidden, tape.Parameter("edge.fc2.weight")),
                           tape.Parameter("edge.fc2.bias"));
}

Var DocModel::EdgeRepresentation(Tape& tape, Var h,
                                 std::optional<Var> node_logits,
                                 const GraphInputs& in) const {
  CheckNodeLogits(config_, node_logits);
  std::vector<Var> parts;
  Var hs = tape.GatherRows(h, in.edge_src);
  Var hd = tape.GatherRows(h, in.edge_dst);
  if (config_.schema.directed) {
    parts = {hs, hd};
  } else {
    parts = {tape.Add(hs, hd)};
  }
  if (node_logits) {
    Var probs = tape.SoftmaxRows(*node_logits);
    parts.push_back(tape.GatherRows(probs, in.edge_src));
    parts.push_back(tape.GatherRows(probs, in.edge_dst));
  }
  parts.push_back(tape.Input(in.polar));
  return tape.ConcatCols(parts);
}

Var DocModel::EdgeLogitsReference(Tape& tape, Var h,
                                  std::optional<Var> node_logits,
                                  const GraphInputs& in, bool training,
                                  Rng& rng) const {
  Var rep = EdgeRepresentation(tape, h, node_logits, in);
  if (tape.value(rep).cols() != static_cast<size_t>(config_.EdgeInputDim())) {
    throw Error("edge representation width does not match config");
  }
  Var pre = tape.AddRowVector(tape.MatMul(rep, tape.Parameter("edge.fc1.weight")),
                              tape.Parameter("edge.fc1.bias"));
  Var hidden = tape.Dropout(tape.Relu(pre), config_.dropout, training, rng);
  return tape.AddRowVector(tape.MatMul(hidden, tape.Parameter("edge.fc2.weight")),
                           tape.Parameter("edge.fc2.bias"));
}

ForwardOutput DocModel::Forward(Tape& tape, const GraphInputs& in,
                                bool training, Rng& rng) const {
  ForwardOutput out;
  Var h = ProjectInputs(tape, in);
  for (int l = 0; l < config_.gnn_layers; ++l) {
    h = GnnLayer(tape, h, in.neighbors, l);
  }
  out.hidden = h;
  if (config_.schema.use_node_head) out.node_logits = NodeLogits(tape, h);
  if (in.edge_src.empty()) {
    // Single-node documents have no edges to classify.
    out.edge_logits = tape.Input(
        Tensor(0, config_.schema.edge_classes.size()));
    return out;
  }
  out.edge_logits = EdgeLogits(tape, h, out.node_logits, in, training, rng);
  return out;
}

size_t CountParameters(const ModelConfig& c) {
  const size_t p = c.ip_dim, h = c.HiddenDim();
  size_t total = 0;
  if (c.use_geometric) total += 4 * p + p;
  if (c.use_textual) total += static_cast<size_t>(c.text_dim) * p + p;
  if (c.use_visual) total += static_cast<size_t>(c.visual_dim) * p + p;
  total += static_cast<size_t>(c.gnn_layers) * 2 * h * h;
  const size_t nc = c.schema.node_classes.size();
  const size_t ec = c.schema.edge_classes.size();
  if (c.schema.use_node_head) total += h * nc + nc;
  total += static_cast<size_t>(c.EdgeInputDim()) * c.ep_inner + c.ep_inner;
  total += static_cast<size_t>(c.ep_inner) * ec + ec;
  return total;
}

}  // namespace docgraph
