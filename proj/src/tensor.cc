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

#include "docgraph/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace docgraph {

Tensor::Tensor(std::vector<size_t> shape, Real fill) : shape_(std::move(shape)) {
  const size_t n = std::accumulate(shape_.begin(), shape_.end(), size_t{1},
                                   std::multiplies<size_t>());
  data_.assign(n, fill);
}

Tensor::Tensor(size_t rows, size_t cols, std::vector<Real> values)
    : shape_{rows, cols}, data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw Error("tensor data length " + std::to_string(data_.size()) +
                " does not match shape " + ShapeString());
  }
}

Tensor Tensor::FromRows(const std::vector<std::vector<Real>>& rows) {
  const size_t r = rows.size();
  const size_t c = r == 0 ? 0 : rows[0].size();
  std::vector<Real> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error("ragged rows in Tensor::FromRows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor(r, c, std::move(data));
}

Real Tensor::item() const {
  if (data_.size() != 1) {
    throw Error("item() on tensor of shape " + ShapeString());
  }
  return data_[0];
}

void Tensor::Fill(Real v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::AllFinite() const {
  for (Real v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::ShapeString() const {
  std::string s = "[";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

ParamId ParamStore::Add(const std::string& name, Tensor init) {
  if (index_.count(name)) throw Error("duplicate parameter '" + name + "'");
  const ParamId id = values_.size();
  names_.push_back(name);
  grads_.emplace_back(init.shape(), Real{0});
  values_.push_back(std::move(init));
  index_[name] = id;
  return id;
}

ParamId ParamStore::AddUniform(const std::string& name, size_t rows,
                               size_t cols, double bound) {
  Tensor t(rows, cols);
  for (Real& v : t.values()) v = static_cast<Real>(rng_.Uniform(-bound, bound));
  return Add(name, std::move(t));
}

ParamId ParamStore::AddZeros(const std::string& name, size_t rows,
                             size_t cols) {
  return Add(name, Tensor(rows, cols));
}

ParamId ParamStore::Find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown parameter '" + name + "'");
  return it->second;
}

void ParamStore::ZeroGrad() {
  for (Tensor& g : grads_) g.Fill(0);
  has_gradients_ = false;
}

size_t ParamStore::ParameterCount() const {
  size_t n = 0;
  for (const Tensor& v : values_) n += v.size();
  return n;
}

}  // namespace docgraph
