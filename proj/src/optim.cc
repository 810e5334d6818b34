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

#include "docgraph/optim.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace docgraph {

AdamW::AdamW(const ParamStore& store, AdamWOptions options)
    : options_(options) {
  if (!(options_.lr > 0)) throw Error("learning rate must be positive");
  if (options_.weight_decay < 0) throw Error("weight decay must be >= 0");
  for (ParamId id = 0; id < store.size(); ++id) {
    m_.emplace_back(store.value(id).size(), 0.0);
    v_.emplace_back(store.value(id).size(), 0.0);
  }
}

void AdamW::Step(ParamStore& store) {
  if (!store.has_gradients()) {
    throw Error("AdamW::Step called before backward");
  }
  if (store.size() != m_.size()) {
    throw Error("AdamW: parameter store changed after construction");
  }
  ++step_;
  const double lr = options_.lr;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double decay = 1.0 - lr * options_.weight_decay;
  for (ParamId id = 0; id < store.size(); ++id) {
    Tensor& p = store.value(id);
    const Tensor& g = store.grad(id);
    std::vector<double>& m = m_[id];
    std::vector<double>& v = v_[id];
    for (size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      m[i] = b1 * m[i] + (1.0 - b1) * gi;
      v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      double pi = static_cast<double>(p[i]) * decay;
      pi -= lr * m_hat / (std::sqrt(v_hat) + options_.eps);
      p[i] = static_cast<Real>(pi);
    }
  }
  store.ZeroGrad();
}

namespace {

constexpr char kMagic[8] = {'D', 'G', 'C', 'K', 'P', 'T', 0, 0};
constexpr uint32_t kVersion = 1;

template <typename T>
void WriteLE(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T ReadLE(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw Error("truncated checkpoint");
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string ReadBytes(std::istream& in, uint64_t n) {
  if (n > (uint64_t{1} << 32)) throw Error("corrupt checkpoint length");
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw Error("truncated checkpoint");
  return s;
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path, const ParamStore& store,
                    const std::string& config_snapshot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WriteLE<uint32_t>(out, kVersion);
  WriteLE<uint64_t>(out, config_snapshot.size());
  out.write(config_snapshot.data(), static_cast<std::streamsize>(config_snapshot.size()));
  WriteLE<uint32_t>(out, static_cast<uint32_t>(store.size()));
  for (ParamId id = 0; id < store.size(); ++id) {
    const std::string& name = store.name(id);
    const Tensor& t = store.value(id);
    WriteLE<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WriteLE<uint32_t>(out, static_cast<uint32_t>(t.rank()));
    for (size_t d : t.shape()) WriteLE<uint64_t>(out, d);
    for (Real v : t.values()) {
      WriteLE<uint64_t>(out, std::bit_cast<uint64_t>(static_cast<double>(v)));
    }
  }
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(path.string() + " is not a checkpoint file");
  }
  const uint32_t version = ReadLE<uint32_t>(in);
  if (version != kVersion) {
    throw Error("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.config_snapshot = ReadBytes(in, ReadLE<uint64_t>(in));
  const uint32_t count = ReadLE<uint32_t>(in);
  for (uint32_t k = 0; k < count; ++k) {
    std::string name = ReadBytes(in, ReadLE<uint32_t>(in));
    const uint32_t rank = ReadLE<uint32_t>(in);
    if (rank > 8) throw Error("corrupt checkpoint rank");
    std::vector<size_t> shape(rank);
    for (size_t& d : shape) d = ReadLE<uint64_t>(in);
    Tensor t(shape);
    for (Real& v : t.values()) {
      v = static_cast<Real>(std::bit_cast<double>(ReadLE<uint64_t>(in)));
    }
    ckpt.params.emplace_back(std::move(name), std::move(t));
  }
  return ckpt;
}

void RestoreParams(const Checkpoint& checkpoint, ParamStore& store) {
  if (checkpoint.params.size() != store.size()) {
    throw Error("checkpoint/config mismatch: checkpoint has " +
                std::to_string(checkpoint.params.size()) +
                " parameters, model has " + std::to_string(store.size()));
  }
  for (const auto& [name, tensor] : checkpoint.params) {
    if (!store.Contains(name)) {
      throw Error("checkpoint/config mismatch: unknown parameter '" + name + "'");
    }
    Tensor& dst = store.value(store.Find(name));
    if (!dst.SameShape(tensor)) {
      throw Error("checkpoint/config mismatch: parameter '" + name +
                  "' has shape " + tensor.ShapeString() + ", model expects " +
                  dst.ShapeString());
    }
    dst = tensor;
  }
}

}  // namespace docgraph
