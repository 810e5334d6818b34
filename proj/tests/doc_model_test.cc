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

#include "docgraph/doc_model.h"

#include <set>

#include <gtest/gtest.h>

namespace docgraph {
namespace {

std::vector<DocNode> Nodes(int n) {
  std::vector<DocNode> nodes(n);
  for (int i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].box = BoundingBox::Make(i, i, i + 1, i + 1);
  }
  return nodes;
}

Page TestPage() { return Page::Make(100, 100, "doc"); }

TEST(DocumentGraphTest, SmallExamples) {
  EXPECT_EQ(NewDocumentGraph(TestPage(), Nodes(3), true).edges.size(), 6u);
  EXPECT_EQ(NewDocumentGraph(TestPage(), Nodes(3), false).edges.size(), 3u);
  EXPECT_TRUE(NewDocumentGraph(TestPage(), Nodes(1), true).edges.empty());
}

TEST(DocumentGraphTest, EdgeCountsAndShapeForAllSizes) {
  for (int n = 1; n <= 50; ++n) {
    const DocumentGraph d = NewDocumentGraph(TestPage(), Nodes(n), true);
    const DocumentGraph u = NewDocumentGraph(TestPage(), Nodes(n), false);
    ASSERT_EQ(d.edges.size(), static_cast<size_t>(n * (n - 1)));
    ASSERT_EQ(u.edges.size(), static_cast<size_t>(n * (n - 1) / 2));
    std::set<std::pair<int, int>> seen;
    for (const DocEdge& e : d.edges) {
      ASSERT_NE(e.src, e.dst);
      ASSERT_TRUE(seen.insert({e.src, e.dst}).second);
    }
    for (const DocEdge& e : u.edges) ASSERT_LT(e.src, e.dst);
  }
}

TEST(DocumentGraphTest, RejectsBadNodeSets) {
  EXPECT_THROW(NewDocumentGraph(TestPage(), {}, true), Error);
  auto dup = Nodes(3);
  dup[2].id = 1;
  EXPECT_THROW(NewDocumentGraph(TestPage(), dup, true), Error);
}

TEST(BoundingBoxTest, ValidatesInvariants) {
  EXPECT_THROW(BoundingBox::Make(2, 0, 1, 1), Error);
  EXPECT_THROW(BoundingBox::Make(-1, 0, 1, 1), Error);
  EXPECT_THROW(BoundingBox::Make(0, 0, 1, std::nan("")), Error);
  EXPECT_NO_THROW(BoundingBox::Make(5, 5, 5, 5));
  EXPECT_THROW(Page::Make(0, 10, "x"), Error);
}

TEST(BoundingBoxTest, UnionAndIntersection) {
  const BoundingBox a = BoundingBox::Make(0, 0, 2, 2);
  const BoundingBox b = BoundingBox::Make(1, 1, 3, 4);
  EXPECT_EQ(a.Union(b), BoundingBox::Make(0, 0, 3, 4));
  EXPECT_DOUBLE_EQ(a.IntersectionArea(b), 1.0);
  EXPECT_DOUBLE_EQ(a.IntersectionArea(BoundingBox::Make(5, 5, 6, 6)), 0.0);
}

TEST(TaskSchemaTest, BuiltInSchemas) {
  const TaskSchema f = FunsdSchema();
  EXPECT_TRUE(f.directed);
  EXPECT_EQ(f.EdgeClass("key-value"), 1);
  EXPECT_EQ(f.PositiveEdgeClass(), 1);
  EXPECT_FALSE(f.TableEdgeClass());
  const TaskSchema r = RvlSchema();
  EXPECT_FALSE(r.directed);
  EXPECT_EQ(r.node_classes.size(), 6u);
  EXPECT_EQ(r.TableEdgeClass(), 1);
  EXPECT_THROW(SchemaByName("cord"), Error);
  EXPECT_THROW(f.NodeClass("total"), Error);
}

TEST(TaskSchemaTest, ValidateRejectsMissingNone) {
  TaskSchema s = FunsdSchema();
  s.edge_classes = {"key-value", "none"};
  EXPECT_THROW(s.Validate(), Error);
}

TEST(RngTest, ReproducibleAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.Uniform();
    ASSERT_EQ(u, b.Uniform());
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(a.Index(7), 7u);
    b.Index(7);
  }
}

}  // namespace
}  // namespace docgraph
