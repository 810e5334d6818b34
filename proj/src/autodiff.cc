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

#include "docgraph/autodiff.h"

#include <algorithm>
#include <cmath>

namespace docgraph {

Tape::Tape(ParamStore& store) : store_(&store), frozen_(&store) {}

Tape::Tape(const ParamStore& store) : frozen_(&store), recording_(false) {}

Tape::Tape() = default;

const Tensor& Tape::Value(size_t index) const {
  const Node& node = nodes_.at(index);
  return node.external ? *node.external : node.value;
}

const Tensor& Tape::value(Var v) const { return Value(v.index); }

Tensor Tape::grad(Var v) const {
  const Node& node = nodes_.at(v.index);
  if (node.grad.empty()) return Tensor(value(v).shape(), Real{0});
  return node.grad;
}

Tensor& Tape::GradOf(size_t index) {
  Node& node = nodes_[index];
  if (node.grad.empty()) node.grad = Tensor(Value(index).shape(), Real{0});
  return node.grad;
}

bool Tape::AnyRequiresGrad(std::initializer_list<Var> vars) const {
  if (!recording_) return false;
  for (Var v : vars) {
    if (nodes_.at(v.index).requires_grad) return true;
  }
  return false;
}

void Tape::RequireMatrix(Var v, const char* op) const {
  if (value(v).rank() != 2) {
    throw Error(std::string(op) + ": expected a rank-2 tensor, got " +
                value(v).ShapeString());
  }
}

Var Tape::Push(Tensor value, bool requires_grad, const char* op) {
  if (!value.AllFinite()) {
    throw Error(std::string("non-finite value produced by ") + op);
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad && recording_;
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

Var Tape::Input(Tensor value, bool requires_grad) {
  return Push(std::move(value), requires_grad, "input");
}

Var Tape::Parameter(ParamId id) {
  if (!frozen_) throw Error("tape has no parameter store");
  const Tensor& v = frozen_->value(id);
  if (!v.AllFinite()) throw Error("non-finite parameter '" + frozen_->name(id) + "'");
  Node node;
  node.external = &v;
  node.param = id;
  node.requires_grad = recording_ && store_ != nullptr;
  nodes_.push_back(std::move(node));
  const size_t out = nodes_.size() - 1;
  if (nodes_[out].requires_grad) {
    nodes_[out].backward = [this, out, id] {
      Tensor& dst = store_->grad(id);
      const Tensor& g = nodes_[out].grad;
      for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
    };
  }
  return Var{out};
}

Var Tape::Parameter(const std::string& name) {
  if (!frozen_) throw Error("tape has no parameter store");
  return Parameter(frozen_->Find(name));
}

Var Tape::MatMul(Var a, Var b) {
  RequireMatrix(a, "matmul");
  RequireMatrix(b, "matmul");
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  const size_t m = av.rows(), k = av.cols(), n = bv.cols();
  if (bv.rows() != k) {
    throw Error("matmul shape mismatch: " + av.ShapeString() + " x " +
                bv.ShapeString());
  }
  Tensor out(m, n);
  kernels::MatMul(av.data(), bv.data(), out.data(), m, k, n);
  const bool rg = AnyRequiresGrad({a, b});
  Var res = Push(std::move(out), rg, "matmul");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, b, o, m, k, n] {
      const Tensor& g = nodes_[o].grad;
      if (nodes_[a.index].requires_grad) {
        kernels::MatMulABtAccum(g.data(), Value(b.index).data(),
                                GradOf(a.index).data(), m, n, k);
      }
      if (nodes_[b.index].requires_grad) {
        kernels::MatMulAtBAccum(Value(a.index).data(), g.data(),
                                GradOf(b.index).data(), m, k, n);
      }
    };
  }
  return res;
}

Var Tape::Add(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (!av.SameShape(bv)) {
    throw Error("add shape mismatch: " + av.ShapeString() + " vs " +
                bv.ShapeString());
  }
  Tensor out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const bool rg = AnyRequiresGrad({a, b});
  Var res = Push(std::move(out), rg, "add");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, b, o] {
      const Tensor& g = nodes_[o].grad;
      for (Var v : {a, b}) {
        if (!nodes_[v.index].requires_grad) continue;
        Tensor& dst = GradOf(v.index);
        for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
      }
    };
  }
  return res;
}

Var Tape::AddRowVector(Var a, Var bias) {
  RequireMatrix(a, "add_row_vector");
  const Tensor& av = value(a);
  const Tensor& bv = value(bias);
  const size_t m = av.rows(), n = av.cols();
  if (bv.size() != n) {
    throw Error("bias length " + std::to_string(bv.size()) +
                " does not match " + av.ShapeString());
  }
  Tensor out = av;
  for (size_t i = 0; i < m; ++i) {
    Real* r = out.row(i);
    for (size_t j = 0; j < n; ++j) r[j] += bv[j];
  }
  const bool rg = AnyRequiresGrad({a, bias});
  Var res = Push(std::move(out), rg, "add_row_vector");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, bias, o, m, n] {
      const Tensor& g = nodes_[o].grad;
      if (nodes_[a.index].requires_grad) {
        Tensor& dst = GradOf(a.index);
        for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
      }
      if (nodes_[bias.index].requires_grad) {
        Tensor& dst = GradOf(bias.index);
        for (size_t i = 0; i < m; ++i) {
          const Real* r = g.row(i);
          for (size_t j = 0; j < n; ++j) dst[j] += r[j];
        }
      }
    };
  }
  return res;
}

Var Tape::Mul(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (!av.SameShape(bv)) {
    throw Error("mul shape mismatch: " + av.ShapeString() + " vs " +
                bv.ShapeString());
  }
  Tensor out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const bool rg = AnyRequiresGrad({a, b});
  Var res = Push(std::move(out), rg, "mul");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, b, o] {
      const Tensor& g = nodes_[o].grad;
      if (nodes_[a.index].requires_grad) {
        Tensor& dst = GradOf(a.index);
        const Tensor& other = Value(b.index);
        for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * other[i];
      }
      if (nodes_[b.index].requires_grad) {
        Tensor& dst = GradOf(b.index);
        const Tensor& other = Value(a.index);
        for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * other[i];
      }
    };
  }
  return res;
}

Var Tape::Scale(Var a, Real s) {
  Tensor out = value(a);
  for (Real& v : out.values()) v *= s;
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "scale");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o, s] {
      const Tensor& g = nodes_[o].grad;
      Tensor& dst = GradOf(a.index);
      for (size_t i = 0; i < g.size(); ++i) dst[i] += s * g[i];
    };
  }
  return res;
}

Var Tape::ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error("concat of zero tensors");
  const size_t m = value(parts[0]).rows();
  std::vector<size_t> widths;
  size_t total = 0;
  bool rg = false;
  for (Var p : parts) {
    RequireMatrix(p, "concat");
    if (value(p).rows() != m) {
      throw Error("concat row mismatch: " + value(p).ShapeString());
    }
    widths.push_back(value(p).cols());
    total += value(p).cols();
    rg = rg || AnyRequiresGrad({p});
  }
  Tensor out(m, total);
  size_t offset = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    const Tensor& pv = value(parts[k]);
    for (size_t i = 0; i < m; ++i) {
      std::copy(pv.row(i), pv.row(i) + widths[k], out.row(i) + offset);
    }
    offset += widths[k];
  }
  Var res = Push(std::move(out), rg, "concat");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, parts, widths, o, m, total] {
      const Tensor& g = nodes_[o].grad;
      size_t off = 0;
      for (size_t k = 0; k < parts.size(); ++k) {
        if (nodes_[parts[k].index].requires_grad) {
          Tensor& dst = GradOf(parts[k].index);
          for (size_t i = 0; i < m; ++i) {
            const Real* src = g.data() + i * total + off;
            Real* d = dst.row(i);
            for (size_t j = 0; j < widths[k]; ++j) d[j] += src[j];
          }
        }
        off += widths[k];
      }
    };
  }
  return res;
}

Var Tape::RowSlice(Var a, size_t begin, size_t end) {
  RequireMatrix(a, "row_slice");
  const Tensor& av = value(a);
  if (begin > end || end > av.rows()) {
    throw Error("row slice [" + std::to_string(begin) + ", " +
                std::to_string(end) + ") out of range for " + av.ShapeString());
  }
  const size_t n = av.cols();
  Tensor out(end - begin, n);
  std::copy(av.row(begin), av.row(begin) + (end - begin) * n, out.data());
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "row_slice");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o, begin] {
      const Tensor& g = nodes_[o].grad;
      Real* dst = GradOf(a.index).row(begin);
      for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
    };
  }
  return res;
}

Var Tape::GatherRows(Var a, std::span<const uint32_t> index) {
  RequireMatrix(a, "gather_rows");
  const Tensor& av = value(a);
  const size_t d = av.cols();
  for (uint32_t r : index) {
    if (r >= av.rows()) throw Error("gather_rows: index out of range");
  }
  Tensor out(index.size(), d);
  kernels::GatherRows(av.data(), index, out.data(), d);
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "gather_rows");
  if (rg) {
    const size_t o = res.index;
    std::vector<uint32_t> idx(index.begin(), index.end());
    nodes_[o].backward = [this, a, o, d, idx = std::move(idx)] {
      Tensor& dst = GradOf(a.index);
      kernels::ScatterAddRows(nodes_[o].grad.data(), idx, dst.data(),
                              dst.rows(), d);
    };
  }
  return res;
}

Var Tape::Relu(Var a) {
  Tensor out = value(a);
  for (Real& v : out.values()) v = v > 0 ? v : Real{0};
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "relu");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o] {
      const Tensor& g = nodes_[o].grad;
      const Tensor& y = Value(o);
      Tensor& dst = GradOf(a.index);
      for (size_t i = 0; i < g.size(); ++i) {
        if (y[i] > 0) dst[i] += g[i];
      }
    };
  }
  return res;
}

Var Tape::SoftmaxRows(Var a) {
  RequireMatrix(a, "softmax");
  const Tensor& av = value(a);
  const size_t m = av.rows(), n = av.cols();
  Tensor out(m, n);
  for (size_t i = 0; i < m; ++i) {
    const Real* x = av.row(i);
    Real* y = out.row(i);
    const Real mx = *std::max_element(x, x + n);
    Real z = 0;
    for (size_t j = 0; j < n; ++j) z += (y[j] = std::exp(x[j] - mx));
    for (size_t j = 0; j < n; ++j) y[j] /= z;
  }
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "softmax");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o, m, n] {
      const Tensor& g = nodes_[o].grad;
      const Tensor& y = Value(o);
      Tensor& dst = GradOf(a.index);
      for (size_t i = 0; i < m; ++i) {
        const Real* gy = g.row(i);
        const Real* yy = y.row(i);
        Real dot = 0;
        for (size_t j = 0; j < n; ++j) dot += gy[j] * yy[j];
        Real* d = dst.row(i);
        for (size_t j = 0; j < n; ++j) d[j] += yy[j] * (gy[j] - dot);
      }
    };
  }
  return res;
}

Var Tape::Dropout(Var a, double p, bool training, Rng& rng) {
  if (p < 0 || p >= 1) throw Error("dropout probability must be in [0, 1)");
  if (!training || p == 0) return a;
  const Tensor& av = value(a);
  const Real keep_scale = static_cast<Real>(1.0 / (1.0 - p));
  std::vector<Real> mask(av.size());
  for (Real& m : mask) m = rng.Uniform() < p ? Real{0} : keep_scale;
  Tensor out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(std::move(out), rg, "dropout");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o, mask = std::move(mask)] {
      const Tensor& g = nodes_[o].grad;
      Tensor& dst = GradOf(a.index);
      for (size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * mask[i];
    };
  }
  return res;
}

Var Tape::CrossEntropy(Var logits, std::span<const int> targets,
                       std::span<const Real> class_weights) {
  RequireMatrix(logits, "cross_entropy");
  const Tensor& z = value(logits);
  const size_t m = z.rows(), c = z.cols();
  if (m == 0) throw Error("cross_entropy over zero rows");
  if (targets.size() != m) {
    throw Error("cross_entropy: " + std::to_string(targets.size()) +
                " targets for " + std::to_string(m) + " rows");
  }
  if (!class_weights.empty() && class_weights.size() != c) {
    throw Error("cross_entropy: class weight count does not match classes");
  }
  Tensor probs(m, c);
  std::vector<Real> w(m);
  Real total_weight = 0;
  Real loss = 0;
  for (size_t i = 0; i < m; ++i) {
    const int y = targets[i];
    if (y < 0 || static_cast<size_t>(y) >= c) {
      throw Error("cross_entropy: target class out of range");
    }
    const Real* x = z.row(i);
    Real* p = probs.row(i);
    const Real mx = *std::max_element(x, x + c);
    Real sum = 0;
    for (size_t j = 0; j < c; ++j) sum += (p[j] = std::exp(x[j] - mx));
    for (size_t j = 0; j < c; ++j) p[j] /= sum;
    const Real log_p = x[y] - mx - std::log(sum);
    w[i] = class_weights.empty() ? Real{1} : class_weights[y];
    total_weight += w[i];
    loss -= w[i] * log_p;
  }
  if (!(total_weight > 0)) {
    throw Error("cross_entropy: total class weight must be positive");
  }
  loss /= total_weight;
  const bool rg = AnyRequiresGrad({logits});
  Var res = Push(Tensor::Scalar(loss), rg, "cross_entropy");
  if (rg) {
    const size_t o = res.index;
    std::vector<int> t(targets.begin(), targets.end());
    nodes_[o].backward = [this, logits, o, m, c, total_weight,
                          probs = std::move(probs), w = std::move(w),
                          t = std::move(t)] {
      const Real g = nodes_[o].grad[0];
      Tensor& dst = GradOf(logits.index);
      for (size_t i = 0; i < m; ++i) {
        const Real f = g * w[i] / total_weight;
        const Real* p = probs.row(i);
        Real* d = dst.row(i);
        for (size_t j = 0; j < c; ++j) d[j] += f * p[j];
        d[t[i]] -= f;
      }
    };
  }
  return res;
}

Var Tape::Sum(Var a) {
  Real s = 0;
  for (Real v : value(a).values()) s += v;
  const bool rg = AnyRequiresGrad({a});
  Var res = Push(Tensor::Scalar(s), rg, "sum");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, a, o] {
      const Real g = nodes_[o].grad[0];
      for (Real& d : GradOf(a.index).values()) d += g;
    };
  }
  return res;
}

Var Tape::Mean(Var a) {
  const size_t n = value(a).size();
  if (n == 0) throw Error("mean of empty tensor");
  return Scale(Sum(a), static_cast<Real>(1.0 / static_cast<double>(n)));
}

Var Tape::Aggregate(Var h, const NeighborLists& lists) {
  RequireMatrix(h, "aggregate");
  const Tensor& hv = value(h);
  if (hv.rows() != lists.num_nodes) {
    throw Error("aggregate: neighbor lists cover " +
                std::to_string(lists.num_nodes) + " nodes, features have " +
                std::to_string(hv.rows()));
  }
  const size_t d = hv.cols();
  Tensor out(hv.rows(), d);
  kernels::Aggregate(lists, hv.data(), out.data(), d);
  const bool rg = AnyRequiresGrad({h});
  Var res = Push(std::move(out), rg, "aggregate");
  if (rg) {
    const size_t o = res.index;
    nodes_[o].backward = [this, h, o, d, &lists] {
      kernels::AggregateBackward(lists, nodes_[o].grad.data(),
                                 GradOf(h.index).data(), d);
    };
  }
  return res;
}

void Tape::Backward(Var loss) {
  if (!recording_) throw Error("backward on an inference tape");
  if (value(loss).size() != 1) {
    throw Error("backward needs a scalar loss, got " +
                value(loss).ShapeString());
  }
  if (!nodes_[loss.index].requires_grad) {
    throw Error("loss does not depend on any differentiable input");
  }
  GradOf(loss.index)[0] += 1;
  for (size_t i = loss.index + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.backward && !node.grad.empty()) node.backward();
  }
  if (store_) store_->MarkGradients();
}

}  // namespace docgraph
