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

#include "docgraph/pipeline.h"

#include <filesystem>
#include <regex>

#include <gtest/gtest.h>

#include "docgraph/graph_builder.h"
#include "docgraph/render.h"
#include "docgraph/synth.h"

namespace docgraph {
namespace {

namespace fs = std::filesystem;

size_t Count(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                       std::sregex_iterator());
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("docgraph_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(SynthTest, DeterministicAndPrefixStable) {
  SynthOptions a;
  a.docs = 5;
  a.seed = 11;
  SynthOptions b = a;
  b.docs = 8;
  const auto x = GenerateCorpus(a), y = GenerateCorpus(a), z = GenerateCorpus(b);
  EXPECT_EQ(x, y);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i], z[i]);
  SynthOptions c = a;
  c.seed = 12;
  EXPECT_NE(GenerateCorpus(c)[0], x[0]);
}

TEST(SynthTest, FormsLinkQuestionToAnswer) {
  SynthOptions o;
  o.docs = 20;
  const TaskSchema s = FunsdSchema();
  for (const RawAnnotation& d : GenerateCorpus(o)) {
    ASSERT_GE(d.links.size(), static_cast<size_t>(o.min_pairs));
    ASSERT_LE(d.links.size(), static_cast<size_t>(o.max_pairs));
    for (const RawLink& l : d.links) {
      EXPECT_EQ(*d.entities[l.src].cls, s.NodeClass("question"));
      EXPECT_EQ(*d.entities[l.dst].cls, s.NodeClass("answer"));
      EXPECT_LT(d.entities[l.src].box.x1, d.entities[l.dst].box.x0);
    }
  }
}

TEST(SynthTest, InvoiceTablesCoverTheirCells) {
  SynthOptions o;
  o.kind = SynthOptions::Kind::kInvoices;
  o.docs = 10;
  o.tables = 2;
  const TaskSchema s = RvlSchema();
  for (const RawAnnotation& d : GenerateCorpus(o)) {
    ASSERT_EQ(d.regions.size(), 2u);
    EXPECT_EQ(d.regions[0].box.IntersectionArea(d.regions[1].box), 0.0);
    for (const RawRegion& r : d.regions) {
      BoundingBox u;
      bool first = true;
      for (const RawEntity& e : d.entities) {
        if (e.cls == s.NodeClass("table") && r.box.ContainsPoint(e.box.CenterX(), e.box.CenterY())) {
          u = first ? e.box : u.Union(e.box);
          first = false;
        }
      }
      EXPECT_EQ(u, r.box);
    }
  }
}

TEST(RenderTest, CountsAndColors) {
  std::vector<DocNode> nodes(3);
  for (int i = 0; i < 3; ++i) {
    nodes[i].id = i;
    nodes[i].box = BoundingBox::Make(10 + 100 * i, 10, 60 + 100 * i, 30);
  }
  const DocumentGraph g = NewDocumentGraph(Page::Make(400, 100, "r"), nodes, true);
  const TaskSchema s = FunsdSchema();
  RenderLayers l;
  l.node_class = {s.NodeClass("question"), s.NodeClass("answer"), -1};
  l.links = {{0, 1}};
  l.tables = {BoundingBox::Make(5, 5, 200, 40)};
  const std::string svg = RenderSvg(g, s, l);
  EXPECT_EQ(Count(svg, "<rect class=\"node\""), 3u);
  EXPECT_EQ(Count(svg, "<rect class=\"table\""), 1u);
  EXPECT_EQ(Count(svg, "<line class=\"link\""), 1u);
  EXPECT_EQ(Count(svg, "class=\"src\"[^>]*fill=\"#00b000\""), 1u);
  EXPECT_EQ(Count(svg, "class=\"dst\"[^>]*fill=\"#e00000\""), 1u);
  EXPECT_NE(svg.find(ClassColor(s, s.NodeClass("question"))), std::string::npos);
  EXPECT_EQ(ClassColor(s, s.NodeClass("other")), "#9a9a9a");
}

TEST(PipelineTest, GroundTruthLayersSplitTablesFromLinks) {
  SynthOptions o;
  o.kind = SynthOptions::Kind::kInvoices;
  o.docs = 1;
  o.tables = 2;
  const TaskSchema s = RvlSchema();
  const auto graphs = BuildGraphs(GenerateCorpus(o), s, TextEncoder::Hashing(8), {});
  const RenderLayers l = GroundTruthLayers(graphs[0], s);
  EXPECT_TRUE(l.links.empty());
  ASSERT_EQ(l.tables.size(), 2u);
  EXPECT_EQ(l.tables, graphs[0].gt_tables);
}

TEST(PipelineTest, PredictionsRoundTripThroughJsonLines) {
  DocPrediction p;
  p.doc_id = "a";
  p.node_class = {1, 0};
  p.node_probs = {{0.1, 0.7, 0.1, 0.1}, {0.4, 0.2, 0.2, 0.2}};
  p.edge_src = {0, 1};
  p.edge_dst = {1, 0};
  p.edge_class = {1, 0};
  p.edge_probs = {{0.25, 0.75}, {0.9, 0.1}};
  p.loss = 0.125;
  DocPrediction q = p;
  q.loss.reset();
  q.doc_id = "b";
  const fs::path dir = TempDir("jsonl");
  WritePredictions(dir / "p.jsonl", {p, q}, FunsdSchema());
  const auto back = LoadPredictions(dir / "p.jsonl", FunsdSchema());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].doc_id, "a");
  EXPECT_EQ(back[1].doc_id, "b");
  EXPECT_EQ(back[0].edge_probs, p.edge_probs);
  EXPECT_EQ(back[0].node_class, p.node_class);
  EXPECT_EQ(back[0].edge_src, p.edge_src);
  EXPECT_EQ(back[0].loss, 0.125);
  EXPECT_FALSE(back[1].loss.has_value());
}

TEST(PipelineTest, LoadGraphsAcceptsDatasetOrCache) {
  SynthOptions o;
  o.docs = 3;
  const fs::path dir = TempDir("load");
  WriteDataset(dir / "d.json", GenerateCorpus(o), FunsdSchema());
  const RunConfig cfg = ConfigFromText("", {"model.text_dim=16"});
  const auto from_data = LoadGraphs(dir / "d.json", cfg);
  SaveGraphCache(dir / "g.json", from_data, FunsdSchema());
  EXPECT_EQ(LoadGraphs(dir / "g.json", cfg), from_data);
}

TEST(PipelineTest, DropEmptyDocuments) {
  std::vector<RawAnnotation> docs(2);
  docs[0].doc_id = "empty";
  docs[1].doc_id = "full";
  docs[1].entities.resize(1);
  const auto kept = DropEmptyDocuments(docs);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].doc_id, "full");
}

}  // namespace
}  // namespace docgraph
