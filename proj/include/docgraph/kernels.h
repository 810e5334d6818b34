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

#ifndef DOCGRAPH_KERNELS_H_
#define DOCGRAPH_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "docgraph/common.h"

namespace docgraph {

// Compressed neighbor sets for the scaled-mean aggregation:
//   out[i] = scale[i] * sum_{j in row i} h[j]
// Neighbors are stored ascending, which fixes the summation order.
struct NeighborLists {
  size_t num_nodes = 0;
  std::vector<size_t> offsets;      // num_nodes + 1
  std::vector<uint32_t> neighbors;  // ascending within a row
  std::vector<Real> scale;          // one per row
  // Transpose, used by the backward pass.
  std::vector<size_t> t_offsets;
  std::vector<uint32_t> t_rows;

  static NeighborLists FromLists(
      const std::vector<std::vector<uint32_t>>& lists,
      std::vector<Real> scale);

  size_t Degree(size_t i) const { return offsets[i + 1] - offsets[i]; }
};

// Dense and sparse kernels. The top-level versions are OpenMP-parallel over
// output rows; every output element is accumulated in the same order as the
// serial reference, so results are bit-identical for any thread count.
namespace kernels {

// c[m x n] = a[m x k] * b[k x n]
void MatMul(const Real* a, const Real* b, Real* c, size_t m, size_t k,
            size_t n);
// c[k x n] += a[m x k]^T * b[m x n]
void MatMulAtBAccum(const Real* a, const Real* b, Real* c, size_t m, size_t k,
                    size_t n);
// c[m x k] += a[m x n] * b[k x n]^T
void MatMulABtAccum(const Real* a, const Real* b, Real* c, size_t m, size_t n,
                    size_t k);

void Aggregate(const NeighborLists& lists, const Real* h, Real* out, size_t d);
// grad_h += transpose-aggregate(grad_out)
void AggregateBackward(const NeighborLists& lists, const Real* grad_out,
                       Real* grad_h, size_t d);

// out[e] = src[index[e]]
void GatherRows(const Real* src, std::span<const uint32_t> index, Real* out,
                size_t d);
// grad_src[index[e]] += grad_out[e], accumulated in ascending e.
void ScatterAddRows(const Real* grad_out, std::span<const uint32_t> index,
                    Real* grad_src, size_t num_src_rows, size_t d);

// Straightforward single-threaded versions kept as test oracles and
// benchmark baselines.
namespace serial {
void MatMul(const Real* a, const Real* b, Real* c, size_t m, size_t k,
            size_t n);
void MatMulAtBAccum(const Real* a, const Real* b, Real* c, size_t m, size_t k,
                    size_t n);
void MatMulABtAccum(const Real* a, const Real* b, Real* c, size_t m, size_t n,
                    size_t k);
void Aggregate(const NeighborLists& lists, const Real* h, Real* out, size_t d);
void AggregateBackward(const NeighborLists& lists, const Real* grad_out,
                       Real* grad_h, size_t d);
void ScatterAddRows(const Real* grad_out, std::span<const uint32_t> index,
                    Real* grad_src, size_t num_src_rows, size_t d);
}  // namespace serial

}  // namespace kernels
}  // namespace docgraph

#endif  // DOCGRAPH_KERNELS_H_
