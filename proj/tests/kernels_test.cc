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

#include <omp.h>

#include <gtest/gtest.h>

#include "oracles.h"

namespace docgraph {
namespace {

using testing::RandomTensor;

// Sparsify so the zero-skipping path is exercised too.
Tensor Sparse(size_t r, size_t c, Rng& rng) {
  Tensor t = RandomTensor(r, c, rng);
  for (size_t i = 0; i < t.size(); ++i) {
    if (rng.Bernoulli(0.3)) t[i] = 0;
  }
  return t;
}

class KernelsTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { omp_set_num_threads(GetParam()); }
};

TEST_P(KernelsTest, MatMulMatchesSerialBitwise) {
  Rng rng(1);
  for (auto [m, k, n] : {std::tuple<size_t, size_t, size_t>{3, 5, 7},
                         {64, 300, 300}, {257, 40, 129}}) {
    Tensor a = Sparse(m, k, rng), b = RandomTensor(k, n, rng);
    Tensor c1(m, n), c2(m, n);
    kernels::MatMul(a.data(), b.data(), c1.data(), m, k, n);
    kernels::serial::MatMul(a.data(), b.data(), c2.data(), m, k, n);
    EXPECT_EQ(c1, c2);
    EXPECT_EQ(c1, testing::OracleMatMul(a, b));
  }
}

TEST_P(KernelsTest, TransposedProductsMatchSerialBitwise) {
  Rng rng(2);
  for (auto [m, k, n] : {std::tuple<size_t, size_t, size_t>{4, 3, 2},
                         {200, 150, 170}}) {
    Tensor a = Sparse(m, k, rng), b = RandomTensor(m, n, rng);
    Tensor c1 = RandomTensor(k, n, rng), c2 = c1;
    kernels::MatMulAtBAccum(a.data(), b.data(), c1.data(), m, k, n);
    kernels::serial::MatMulAtBAccum(a.data(), b.data(), c2.data(), m, k, n);
    EXPECT_EQ(c1, c2);

    Tensor x = RandomTensor(m, n, rng), y = RandomTensor(k, n, rng);
    Tensor d1 = RandomTensor(m, k, rng), d2 = d1;
    kernels::MatMulABtAccum(x.data(), y.data(), d1.data(), m, n, k);
    kernels::serial::MatMulABtAccum(x.data(), y.data(), d2.data(), m, n, k);
    EXPECT_EQ(d1, d2);
  }
}

NeighborLists RandomLists(size_t n, Rng& rng) {
  std::vector<std::vector<uint32_t>> lists(n);
  std::vector<Real> scale(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (j != i && rng.Bernoulli(0.4)) lists[i].push_back(static_cast<uint32_t>(j));
    }
    if (!lists[i].empty()) scale[i] = Real(0.1) / lists[i].size();
  }
  return NeighborLists::FromLists(lists, scale);
}

TEST_P(KernelsTest, AggregationMatchesSerialBitwise) {
  Rng rng(3);
  for (size_t n : {1, 7, 150}) {
    const size_t d = 300;
    NeighborLists lists = RandomLists(n, rng);
    Tensor h = RandomTensor(n, d, rng);
    Tensor o1(n, d), o2(n, d);
    kernels::Aggregate(lists, h.data(), o1.data(), d);
    kernels::serial::Aggregate(lists, h.data(), o2.data(), d);
    EXPECT_EQ(o1, o2);

    Tensor g1 = RandomTensor(n, d, rng), g2 = g1;
    kernels::AggregateBackward(lists, o1.data(), g1.data(), d);
    kernels::serial::AggregateBackward(lists, o1.data(), g2.data(), d);
    EXPECT_EQ(g1, g2);
  }
}

TEST_P(KernelsTest, ScatterAddMatchesSerialBitwise) {
  Rng rng(4);
  const size_t rows = 40, d = 600, e = 40 * 39;
  std::vector<uint32_t> index(e);
  for (auto& i : index) i = static_cast<uint32_t>(rng.Index(rows));
  Tensor g = RandomTensor(e, d, rng);
  Tensor s1 = RandomTensor(rows, d, rng), s2 = s1;
  kernels::ScatterAddRows(g.data(), index, s1.data(), rows, d);
  kernels::serial::ScatterAddRows(g.data(), index, s2.data(), rows, d);
  EXPECT_EQ(s1, s2);

  Tensor out(e, d);
  kernels::GatherRows(s1.data(), index, out.data(), d);
  for (size_t r = 0; r < e; ++r) EXPECT_EQ(out(r, 5), s1(index[r], 5));
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelsTest, ::testing::Values(1, 3, 4));

TEST(NeighborListsTest, TransposeIsConsistent) {
  NeighborLists l = NeighborLists::FromLists({{1, 2}, {}, {0}}, {0.05, 0, 0.1});
  EXPECT_EQ(l.Degree(0), 2u);
  EXPECT_EQ(l.Degree(1), 0u);
  // Node 0 is read by row 2; node 1 and 2 by row 0.
  EXPECT_EQ(l.t_offsets, (std::vector<size_t>{0, 1, 2, 3}));
  EXPECT_EQ(l.t_rows, (std::vector<uint32_t>{2, 0, 0}));
}

}  // namespace
}  // namespace docgraph
