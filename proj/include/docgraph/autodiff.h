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

#ifndef DOCGRAPH_AUTODIFF_H_
#define DOCGRAPH_AUTODIFF_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docgraph/kernels.h"
#include "docgraph/tensor.h"

namespace docgraph {

// Handle to a value recorded on a Tape.
struct Var {
  size_t index = 0;
};

// Reverse-mode differentiation tape. Every op evaluates eagerly, checks the
// result is finite and, when any input needs a gradient, records a backward
// rule. A tape is confined to one thread; parameters are referenced from the
// ParamStore without copying.
class Tape {
 public:
  // Training tape: Backward() accumulates parameter gradients into `store`.
  explicit Tape(ParamStore& store);
  // Inference tape over a frozen store; nothing is recorded.
  explicit Tape(const ParamStore& store);
  // Tape without parameters (op tests).
  Tape();

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Input(Tensor value, bool requires_grad = false);
  Var Parameter(ParamId id);
  Var Parameter(const std::string& name);

  Var MatMul(Var a, Var b);
  Var Add(Var a, Var b);
  // a[m x n] + bias[1 x n] broadcast over rows.
  Var AddRowVector(Var a, Var bias);
  Var Mul(Var a, Var b);  // elementwise
  Var Scale(Var a, Real s);
  Var ConcatCols(const std::vector<Var>& parts);
  Var RowSlice(Var a, size_t begin, size_t end);
  Var GatherRows(Var a, std::span<const uint32_t> index);
  Var Relu(Var a);
  Var SoftmaxRows(Var a);
  // Inverted dropout. Identity when !training or p == 0.
  Var Dropout(Var a, double p, bool training, Rng& rng);
  // Weighted mean cross-entropy over rows:
  //   sum_i w[y_i] * -log softmax(z_i)[y_i] / sum_i w[y_i]
  // Empty `class_weights` means uniform.
  Var CrossEntropy(Var logits, std::span<const int> targets,
                   std::span<const Real> class_weights = {});
  Var Sum(Var a);
  Var Mean(Var a);
  // Scaled-mean neighbor aggregation (see NeighborLists).
  Var Aggregate(Var h, const NeighborLists& lists);

  const Tensor& value(Var v) const;
  // Gradient accumulated by Backward(); zeros when none reached this node.
  Tensor grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.index).requires_grad; }

  // Seeds d(loss)/d(loss) = 1 and runs every recorded rule in reverse order.
  void Backward(Var loss);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;  // parameter value, not owned
    Tensor grad;
    bool requires_grad = false;
    std::optional<ParamId> param;
    std::function<void()> backward;
  };

  Var Push(Tensor value, bool requires_grad, const char* op);
  Tensor& GradOf(size_t index);
  const Tensor& Value(size_t index) const;
  bool AnyRequiresGrad(std::initializer_list<Var> vars) const;
  void RequireMatrix(Var v, const char* op) const;

  ParamStore* store_ = nullptr;
  const ParamStore* frozen_ = nullptr;
  bool recording_ = true;
  std::vector<Node> nodes_;
};

}  // namespace docgraph

#endif  // DOCGRAPH_AUTODIFF_H_
