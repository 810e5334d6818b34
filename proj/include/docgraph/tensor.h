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

#ifndef DOCGRAPH_TENSOR_H_
#define DOCGRAPH_TENSOR_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "docgraph/common.h"

namespace docgraph {

// Dense row-major tensor. The autodiff ops work on rank-2 tensors; scalars
// are 1x1.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, Real fill = 0);
  Tensor(size_t rows, size_t cols, Real fill = 0)
      : Tensor(std::vector<size_t>{rows, cols}, fill) {}
  Tensor(size_t rows, size_t cols, std::vector<Real> values);

  static Tensor FromRows(const std::vector<std::vector<Real>>& rows);
  static Tensor Scalar(Real v) { return Tensor(1, 1, v); }

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  std::span<Real> values() { return data_; }
  std::span<const Real> values() const { return data_; }

  Real& operator()(size_t r, size_t c) { return data_[r * cols() + c]; }
  Real operator()(size_t r, size_t c) const { return data_[r * cols() + c]; }
  Real& operator[](size_t i) { return data_[i]; }
  Real operator[](size_t i) const { return data_[i]; }
  Real* row(size_t r) { return data_.data() + r * cols(); }
  const Real* row(size_t r) const { return data_.data() + r * cols(); }
  Real item() const;

  void Fill(Real v);
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  bool AllFinite() const;
  std::string ShapeString() const;

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<size_t> shape_;
  std::vector<Real> data_;
};

using ParamId = size_t;

// Named trainable parameters with gradients of identical shape.
class ParamStore {
 public:
  explicit ParamStore(uint64_t seed = 0) : seed_(seed), rng_(seed) {}

  ParamId Add(const std::string& name, Tensor init);
  // Weights drawn uniformly from [-bound, bound] using the store's RNG.
  ParamId AddUniform(const std::string& name, size_t rows, size_t cols,
                     double bound);
  ParamId AddZeros(const std::string& name, size_t rows, size_t cols);

  ParamId Find(const std::string& name) const;
  bool Contains(const std::string& name) const {
    return index_.count(name) > 0;
  }

  size_t size() const { return values_.size(); }
  const std::string& name(ParamId id) const { return names_.at(id); }
  Tensor& value(ParamId id) { return values_.at(id); }
  const Tensor& value(ParamId id) const { return values_.at(id); }
  Tensor& grad(ParamId id) { return grads_.at(id); }
  const Tensor& grad(ParamId id) const { return grads_.at(id); }

  void ZeroGrad();
  // Set by backward passes; cleared by ZeroGrad.
  bool has_gradients() const { return has_gradients_; }
  void MarkGradients() { has_gradients_ = true; }

  size_t ParameterCount() const;
  uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }

 private:
  uint64_t seed_;
  Rng rng_;
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
  std::vector<Tensor> grads_;
  std::unordered_map<std::string, ParamId> index_;
  bool has_gradients_ = false;
};

}  // namespace docgraph

#endif  // DOCGRAPH_TENSOR_H_
