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

#include "docgraph/kernels.h"

#include <algorithm>

namespace docgraph {

namespace {
// Below this many multiply-adds a kernel stays on the calling thread.
constexpr size_t kParallelWork = 1 << 15;
}  // namespace

NeighborLists NeighborLists::FromLists(
    const std::vector<std::vector<uint32_t>>& lists, std::vector<Real> scale) {
  if (scale.size() != lists.size()) {
    throw Error("NeighborLists: one scale per row required");
  }
  NeighborLists out;
  out.num_nodes = lists.size();
  out.scale = std::move(scale);
  out.offsets.assign(out.num_nodes + 1, 0);
  for (size_t i = 0; i < out.num_nodes; ++i) {
    if (!std::is_sorted(lists[i].begin(), lists[i].end())) {
      throw Error("NeighborLists: rows must be sorted ascending");
    }
    for (uint32_t j : lists[i]) {
      if (j >= out.num_nodes) throw Error("NeighborLists: index out of range");
    }
    out.offsets[i + 1] = out.offsets[i] + lists[i].size();
    out.neighbors.insert(out.neighbors.end(), lists[i].begin(), lists[i].end());
  }
  // Counting-sort transpose; rows of the transpose come out ascending.
  out.t_offsets.assign(out.num_nodes + 1, 0);
  for (uint32_t j : out.neighbors) ++out.t_offsets[j + 1];
  for (size_t j = 0; j < out.num_nodes; ++j) {
    out.t_offsets[j + 1] += out.t_offsets[j];
  }
  out.t_rows.resize(out.neighbors.size());
  std::vector<size_t> cursor(out.t_offsets.begin(), out.t_offsets.end() - 1);
  for (size_t i = 0; i < out.num_nodes; ++i) {
    for (size_t p = out.offsets[i]; p < out.offsets[i + 1]; ++p) {
      out.t_rows[cursor[out.neighbors[p]]++] = static_cast<uint32_t>(i);
    }
  }
  return out;
}

namespace kernels {

void MatMul(const Real* a, const Real* b, Real* c, size_t m, size_t k,
            size_t n) {
  const long rows = static_cast<long>(m);
#pragma omp parallel for schedule(static) if (m * k * n > kParallelWork)
  for (long i = 0; i < rows; ++i) {
    Real* crow = c + i * n;
    std::fill(crow, crow + n, Real{0});
    const Real* arow = a + i * k;
    for (size_t p = 0; p < k; ++p) {
      const Real aip = arow[p];
      if (aip == 0) continue;
      const Real* brow = b + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void MatMulAtBAccum(const Real* a, const Real* b, Real* c, size_t m, size_t k,
                    size_t n) {
  const long out_rows = static_cast<long>(k);
#pragma omp parallel if (m * k * n > kParallelWork)
  {
    std::vector<Real> acc(n);
#pragma omp for schedule(static)
    for (long p = 0; p < out_rows; ++p) {
      std::fill(acc.begin(), acc.end(), Real{0});
      for (size_t i = 0; i < m; ++i) {
        const Real aip = a[i * k + p];
        if (aip == 0) continue;
        const Real* brow = b + i * n;
        for (size_t j = 0; j < n; ++j) acc[j] += aip * brow[j];
      }
      Real* crow = c + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += acc[j];
    }
  }
}

void MatMulABtAccum(const Real* a, const Real* b, Real* c, size_t m, size_t n,
                    size_t k) {
  // Transpose b once so the inner loop runs over contiguous memory.
  std::vector<Real> bt(n * k);
  for (size_t q = 0; q < k; ++q) {
    for (size_t j = 0; j < n; ++j) bt[j * k + q] = b[q * n + j];
  }
  const long rows = static_cast<long>(m);
#pragma omp parallel if (m * k * n > kParallelWork)
  {
    std::vector<Real> acc(k);
#pragma omp for schedule(static)
    for (long i = 0; i < rows; ++i) {
      std::fill(acc.begin(), acc.end(), Real{0});
      const Real* arow = a + i * n;
      for (size_t j = 0; j < n; ++j) {
        const Real aij = arow[j];
        if (aij == 0) continue;
        const Real* btrow = bt.data() + j * k;
        for (size_t q = 0; q < k; ++q) acc[q] += aij * btrow[q];
      }
      Real* crow = c + i * k;
      for (size_t q = 0; q < k; ++q) crow[q] += acc[q];
    }
  }
}

void Aggregate(const NeighborLists& lists, const Real* h, Real* out,
               size_t d) {
  const long n = static_cast<long>(lists.num_nodes);
#pragma omp parallel for schedule(static) \
    if (lists.neighbors.size() * d > kParallelWork)
  for (long i = 0; i < n; ++i) {
    Real* orow = out + i * d;
    std::fill(orow, orow + d, Real{0});
    for (size_t p = lists.offsets[i]; p < lists.offsets[i + 1]; ++p) {
      const Real* hrow = h + static_cast<size_t>(lists.neighbors[p]) * d;
      for (size_t c = 0; c < d; ++c) orow[c] += hrow[c];
    }
    const Real s = lists.scale[i];
    for (size_t c = 0; c < d; ++c) orow[c] *= s;
  }
}

void AggregateBackward(const NeighborLists& lists, const Real* grad_out,
                       Real* grad_h, size_t d) {
  const long n = static_cast<long>(lists.num_nodes);
#pragma omp parallel for schedule(static) \
    if (lists.neighbors.size() * d > kParallelWork)
  for (long j = 0; j < n; ++j) {
    Real* grow = grad_h + j * d;
    for (size_t p = lists.t_offsets[j]; p < lists.t_offsets[j + 1]; ++p) {
      const size_t i = lists.t_rows[p];
      const Real s = lists.scale[i];
      const Real* gi = grad_out + i * d;
      for (size_t c = 0; c < d; ++c) grow[c] += s * gi[c];
    }
  }
}

void GatherRows(const Real* src, std::span<const uint32_t> index, Real* out,
                size_t d) {
  const long e_count = static_cast<long>(index.size());
#pragma omp parallel for schedule(static) if (index.size() * d > kParallelWork)
  for (long e = 0; e < e_count; ++e) {
    const Real* s = src + static_cast<size_t>(index[e]) * d;
    std::copy(s, s + d, out + e * d);
  }
}

void ScatterAddRows(const Real* grad_out, std::span<const uint32_t> index,
                    Real* grad_src, size_t num_src_rows, size_t d) {
  // Bucket edge positions by destination row, keeping ascending order.
  std::vector<size_t> offsets(num_src_rows + 1, 0);
  for (uint32_t r : index) {
    if (r >= num_src_rows) throw Error("ScatterAddRows: index out of range");
    ++offsets[r + 1];
  }
  for (size_t r = 0; r < num_src_rows; ++r) offsets[r + 1] += offsets[r];
  std::vector<uint32_t> order(index.size());
  std::vector<size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (size_t e = 0; e < index.size(); ++e) {
    order[cursor[index[e]]++] = static_cast<uint32_t>(e);
  }
  const long rows = static_cast<long>(num_src_rows);
#pragma omp parallel for schedule(static) if (index.size() * d > kParallelWork)
  for (long r = 0; r < rows; ++r) {
    Real* grow = grad_src + r * d;
    for (size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      const Real* g = grad_out + static_cast<size_t>(order[p]) * d;
      for (size_t c = 0; c < d; ++c) grow[c] += g[c];
    }
  }
}

namespace serial {

void MatMul(const Real* a, const Real* b, Real* c, size_t m, size_t k,
            size_t n) {
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Real s = 0;
      for (size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] = s;
    }
  }
}

void MatMulAtBAccum(const Real* a, const Real* b, Real* c, size_t m, size_t k,
                    size_t n) {
  for (size_t p = 0; p < k; ++p) {
    for (size_t j = 0; j < n; ++j) {
      Real s = 0;
      for (size_t i = 0; i < m; ++i) s += a[i * k + p] * b[i * n + j];
      c[p * n + j] += s;
    }
  }
}

void MatMulABtAccum(const Real* a, const Real* b, Real* c, size_t m, size_t n,
                    size_t k) {
  for (size_t i = 0; i < m; ++i) {
    for (size_t q = 0; q < k; ++q) {
      Real s = 0;
      for (size_t j = 0; j < n; ++j) s += a[i * n + j] * b[q * n + j];
      c[i * k + q] += s;
    }
  }
}

void Aggregate(const NeighborLists& lists, const Real* h, Real* out,
               size_t d) {
  for (size_t i = 0; i < lists.num_nodes; ++i) {
    for (size_t c = 0; c < d; ++c) {
      Real s = 0;
      for (size_t p = lists.offsets[i]; p < lists.offsets[i + 1]; ++p) {
        s += h[lists.neighbors[p] * d + c];
      }
      out[i * d + c] = lists.scale[i] * s;
    }
  }
}

void AggregateBackward(const NeighborLists& lists, const Real* grad_out,
                       Real* grad_h, size_t d) {
  for (size_t i = 0; i < lists.num_nodes; ++i) {
    for (size_t p = lists.offsets[i]; p < lists.offsets[i + 1]; ++p) {
      const size_t j = lists.neighbors[p];
      for (size_t c = 0; c < d; ++c) {
        grad_h[j * d + c] += lists.scale[i] * grad_out[i * d + c];
      }
    }
  }
}

void ScatterAddRows(const Real* grad_out, std::span<const uint32_t> index,
                    Real* grad_src, size_t num_src_rows, size_t d) {
  for (size_t e = 0; e < index.size(); ++e) {
    if (index[e] >= num_src_rows) {
      throw Error("ScatterAddRows: index out of range");
    }
    for (size_t c = 0; c < d; ++c) {
      grad_src[index[e] * d + c] += grad_out[e * d + c];
    }
  }
}

}  // namespace serial
}  // namespace kernels
}  // namespace docgraph
