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

#ifndef DOCGRAPH_TESTS_ORACLES_H_
#define DOCGRAPH_TESTS_ORACLES_H_

#include <functional>
#include <string>
#include <vector>

#include "docgraph/model.h"
#include "docgraph/training.h"

namespace docgraph::testing {

Tensor RandomTensor(size_t rows, size_t cols, Rng& rng, double lo = -1,
                    double hi = 1);

// Random labeled, featurized fully-connected graph with `n` nodes on a
// 1000 x 800 page; boxes are spread so that distances cover a wide range.
DocumentGraph RandomGraph(int n, const TaskSchema& schema, Rng& rng,
                          int text_dim = 16, int bins = 8);

// Minimum Euclidean gap between two boxes over the page diagonal, in [0, 1].
double OracleGap(const BoundingBox& a, const BoundingBox& b, const Page& page);

// Plain triple loop, k ascending.
Tensor OracleMatMul(const Tensor& a, const Tensor& b);

// Neighbor term by a pair loop over nodes: for each i, the j != i whose gap to
// i is below tau, summed in ascending j, times c / count.
Tensor OracleNeighborMean(const DocumentGraph& graph, const Tensor& h,
                          double tau, double c);

// ReLU(h W_self + neighbor_term W_neigh).
Tensor OracleGnnLayer(const DocumentGraph& graph, const Tensor& h,
                      const Tensor& w_self, const Tensor& w_neigh, double tau,
                      double c);

struct GradCheck {
  double max_rel_error = 0;
  std::string worst;  // "<param>[index]"
  size_t checked = 0;
};

// Central differences of the training-mode joint loss (fixed dropout mask)
// against the tape's parameter gradients. Checks every coordinate when
// `max_per_param` is 0, otherwise that many sampled coordinates per tensor.
// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheck CheckModelGradients(DocModel& model, const GraphInputs& inputs,
                              double eps, size_t max_per_param, uint64_t seed,
                              double floor = 1e-6);

// Mean joint loss of one training-mode forward pass.
double ModelLoss(const DocModel& model, const GraphInputs& inputs,
                 uint64_t dropout_seed);

// Same graph with nodes relabeled by `perm` (new index of old node i is
// perm[i]) and rebuilt edges.
DocumentGraph PermuteGraph(const DocumentGraph& graph,
                           const std::vector<int>& perm);

}  // namespace docgraph::testing

#endif  // DOCGRAPH_TESTS_ORACLES_H_
