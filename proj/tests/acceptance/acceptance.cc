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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failures. Criterion names given as arguments restrict the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

#include "docgraph/graph_builder.h"
#include "docgraph/metrics.h"
#include "docgraph/synth.h"
#include "docgraph/training.h"
#include "oracles.h"

namespace dg = docgraph;
namespace fs = std::filesystem;

namespace {

constexpr double kGradTol = 1e-4;
// Central-difference step. Smaller steps are dominated by round-off on the
// default-size model, larger ones start to cross ReLU kinks.
constexpr double kGradStep = 1e-5;
constexpr double kGradSeconds = 30;
constexpr double kReductionTol = 1e-12;
constexpr double kAucTol = 0.02;
constexpr double kOverfitLoss = 0.05;
constexpr double kOverfitSeconds = 120;
constexpr double kEndToEndKvF1 = 0.85;
constexpr double kEndToEndNodeAcc = 0.95;
constexpr double kEndToEndSeconds = 15 * 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<dg::DocumentGraph> Forms(int docs, uint64_t seed, const dg::ModelConfig& m) {
  dg::SynthOptions o;
  o.docs = docs;
  o.seed = seed;
  dg::FeatureOptions f;
  f.bins = m.bins;
  return dg::BuildGraphs(dg::GenerateCorpus(o), m.schema, dg::TextEncoder::Hashing(m.text_dim),
                         f);
}

std::vector<std::string> Ids(const std::vector<dg::DocumentGraph>& g) {
  std::vector<std::string> ids;
  for (const auto& d : g) ids.push_back(d.page.doc_id);
  return ids;
}

double SummaryMean(const dg::CrossValidationResult& r, const std::string& name) {
  for (const auto& s : r.test_summary) {
    if (s.name == name) return s.mean;
  }
  throw dg::Error("no summary metric " + name);
}

Outcome GradientCheck() {
  const auto t0 = std::chrono::steady_clock::now();
  dg::Rng rng(2024);
  double worst = 0;
  std::string where;
  size_t checked = 0;
  // A narrow model on every coordinate, then the default-size model on a
  // sample of coordinates per tensor.
  dg::ModelConfig narrow;
  narrow.ip_dim = 8;
  narrow.ep_inner = 8;
  narrow.text_dim = 16;
  dg::ModelConfig full;
  for (const auto& [cfg, per] : {std::pair{narrow, size_t{0}}, std::pair{full, size_t{40}}}) {
    dg::DocModel model(cfg, 3);
    const dg::GraphInputs in =
        dg::MakeGraphInputs(dg::testing::RandomGraph(4, cfg.schema, rng, cfg.text_dim), cfg);
    const auto r = dg::testing::CheckModelGradients(model, in, kGradStep, per, 17);
    checked += r.checked;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      where = r.worst;
    }
  }
  const double secs = Seconds(t0);
  return {worst < kGradTol && secs < kGradSeconds,
          Fmt("max rel error %.2e at %s over %zu coordinates, %.1f s", worst, where.c_str(),
              checked, secs)};
}

Outcome AggregationOracle() {
  dg::Rng rng(99);
  const dg::ModelConfig cfg;
  dg::DocModel model(cfg, 1);
  const dg::Tensor& ws = model.params().value(model.params().Find("gnn.0.w_self"));
  const dg::Tensor& wn = model.params().value(model.params().Find("gnn.0.w_neigh"));
  int mismatched = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = static_cast<int>(rng.Int(1, 20));
    const dg::DocumentGraph g = dg::testing::RandomGraph(n, cfg.schema, rng, cfg.text_dim);
    const dg::GraphInputs in = dg::MakeGraphInputs(g, cfg);
    const dg::Tensor h = dg::testing::RandomTensor(n, cfg.HiddenDim(), rng);
    dg::Tape tape(model.params());
    const dg::Tensor got = tape.value(model.GnnLayer(tape, tape.Input(h), in.neighbors, 0));
    mismatched += !(got == dg::testing::OracleGnnLayer(g, h, ws, wn, cfg.threshold, cfg.scale));
  }
  return {mismatched == 0, Fmt("%d of 100 graphs differ from the pair loop", mismatched)};
}

Outcome Reduction() {
  dg::Rng rng(5);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = static_cast<int>(rng.Int(2, 20));
    const dg::DocumentGraph g = dg::testing::RandomGraph(n, dg::FunsdSchema(), rng);
    std::vector<uint32_t> src, dst;
    std::vector<double> dist;
    double max_dist = 0;
    for (const auto& e : g.edges) {
      src.push_back(e.src);
      dst.push_back(e.dst);
      dist.push_back(e.features->distance);
      max_dist = std::max(max_dist, e.features->distance);
    }
    const dg::NeighborLists lists =
        dg::BuildNeighborLists(n, src, dst, dist, true, max_dist + 0.01, 1.0);
    const dg::Tensor h = dg::testing::RandomTensor(n, 32, rng);
    dg::Tape tape;
    const dg::Tensor agg = tape.value(tape.Aggregate(tape.Input(h), lists));
    for (int i = 0; i < n; ++i) {
      for (size_t k = 0; k < h.cols(); ++k) {
        double s = 0;
        for (int j = 0; j < n; ++j) {
          if (j != i) s += h(j, k);
        }
        worst = std::max(worst, std::abs(agg(i, k) - s / (n - 1)));
      }
    }
  }
  return {worst <= kReductionTol, Fmt("max deviation from the plain mean %.2e", worst)};
}

Outcome PolarRotation() {
  dg::Rng rng(45);
  const dg::Page page = dg::Page::Make(1000, 1000, "p");
  const double step = 2 * std::numbers::pi / 8;
  int checked = 0, wrong = 0;
  while (checked < 1000) {
    const double theta = rng.Uniform(0, 2 * std::numbers::pi);
    const double rel = std::fmod(theta * 180 / std::numbers::pi + 22.5, 45.0);
    if (rel < 0.01 || rel > 44.99) continue;
    const double r = rng.Uniform(20, 400);
    const dg::BoundingBox src = dg::BoundingBox::Make(499, 499, 501, 501);
    auto at = [&](double t) {
      const double x = 500 + r * std::cos(t), y = 500 + r * std::sin(t);
      return dg::BoundingBox::Make(x - 1, y - 1, x + 1, y + 1);
    };
    const int b0 = dg::PolarEdgeFeatures(src, at(theta), page, 8).angle_bin;
    const int b1 = dg::PolarEdgeFeatures(src, at(theta + step), page, 8).angle_bin;
    wrong += b1 != (b0 + 1) % 8;
    ++checked;
  }
  return {wrong == 0, Fmt("%d of %d rotations did not shift by one bin", wrong, checked)};
}

Outcome MetricOracles() {
  const double iou =
      dg::Iou(dg::BoundingBox::Make(0, 0, 2, 2), dg::BoundingBox::Make(1, 1, 3, 3));
  dg::Rng rng(2);
  const size_t n = 100000;
  std::vector<double> s(n);
  std::vector<bool> pos(n);
  for (size_t i = 0; i < n; ++i) {
    s[i] = rng.Uniform();
    pos[i] = rng.Bernoulli(0.2);
  }
  const double auc = dg::AucPr(s, pos);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int c = static_cast<int>(rng.Int(2, 7));
    const size_t m = static_cast<size_t>(rng.Int(1, 80));
    std::vector<int> gt(m), pred(m);
    std::vector<std::vector<int>> cm(c, std::vector<int>(c, 0));
    for (size_t i = 0; i < m; ++i) {
      gt[i] = static_cast<int>(rng.Index(c));
      pred[i] = rng.Bernoulli(0.5) ? gt[i] : static_cast<int>(rng.Index(c));
      ++cm[gt[i]][pred[i]];
    }
    const dg::ClassificationReport r = dg::ComputeClassificationReport(pred, gt, c);
    int diag = 0;
    bool ok = r.confusion == cm;
    for (int k = 0; k < c; ++k) {
      diag += cm[k][k];
      int row = 0, col = 0;
      for (int j = 0; j < c; ++j) {
        row += cm[k][j];
        col += cm[j][k];
      }
      const double p = col ? static_cast<double>(cm[k][k]) / col : 0.0;
      const double rc = row ? static_cast<double>(cm[k][k]) / row : 0.0;
      const double f = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
      ok = ok && r.per_class[k].precision == p && r.per_class[k].recall == rc &&
           r.per_class[k].f1 == f;
    }
    ok = ok && r.accuracy == static_cast<double>(diag) / m;
    bad += !ok;
  }
  return {iou == 1.0 / 7.0 && std::abs(auc - 0.2) <= kAucTol && bad == 0,
          Fmt("IoU %.17g, random AUC-PR %.4f, %d of 1000 reports differ", iou, auc, bad)};
}

Outcome OverfitSanity() {
  const auto t0 = std::chrono::steady_clock::now();
  const dg::ModelConfig cfg;
  dg::TrainConfig tc;
  tc.epochs = 200;
  const auto graphs = Forms(1, 0, cfg);
  const std::vector<const dg::DocumentGraph*> one = {&graphs[0]};
  const dg::FoldResult r = dg::TrainFold(one, {}, one, cfg, tc, 0);
  const dg::DocPrediction p = dg::Predict(*r.model, dg::MakeGraphInputs(graphs[0], cfg));
  const double kv = r.test.PositiveEdgeF1();
  const double secs = Seconds(t0);
  return {*p.loss < kOverfitLoss && kv == 1.0 && secs < kOverfitSeconds,
          Fmt("joint loss %.5f (last training epoch %.5f), key-value F1 %.4f, %.1f s", *p.loss,
              r.history.back().train_loss, kv, secs)};
}

Outcome EndToEnd() {
  const auto t0 = std::chrono::steady_clock::now();
  const dg::ModelConfig cfg;
  dg::TrainConfig tc;
  tc.seed = 7;
  const auto graphs = Forms(200, 7, cfg);
  const auto r = dg::CrossValidate(graphs, dg::MakeFolds(Ids(graphs), 3, tc.seed), cfg, tc);
  const double kv = SummaryMean(r, "edge_f1.key-value");
  const double acc = SummaryMean(r, "node_accuracy");
  const double secs = Seconds(t0);
  return {kv >= kEndToEndKvF1 && acc >= kEndToEndNodeAcc && secs < kEndToEndSeconds,
          Fmt("key-value F1 %.4f, node accuracy %.4f, %.0f s", kv, acc, secs)};
}

Outcome AblationOrdering() {
  bool ok = true;
  std::string detail;
  for (uint64_t seed : {1, 2, 3}) {
    double kv[3];
    for (int v = 0; v < 3; ++v) {
      dg::ModelConfig cfg;
      cfg.use_geometric = v != 2;
      cfg.use_textual = v != 1;
      dg::TrainConfig tc;
      tc.seed = seed;
      tc.epochs = 20;
      const auto graphs = Forms(100, seed, cfg);
      kv[v] = SummaryMean(
          dg::CrossValidate(graphs, dg::MakeFolds(Ids(graphs), 3, seed), cfg, tc),
          "edge_f1.key-value");
    }
    ok = ok && kv[0] > kv[1] && kv[0] > kv[2];
    detail += Fmt("%sseed %d: geo+text %.3f, geo %.3f, text %.3f", detail.empty() ? "" : "; ",
                  static_cast<int>(seed), kv[0], kv[1], kv[2]);
  }
  return {ok, detail};
}

Outcome ProjectionRules() {
  const dg::TaskSchema s = dg::FunsdSchema();
  dg::RawAnnotation gt;
  gt.doc_id = "p";
  gt.width = 100;
  gt.height = 50;
  gt.entities = {{dg::BoundingBox::Make(0, 0, 10, 5), "Name:", s.NodeClass("question"), {}},
                 {dg::BoundingBox::Make(20, 0, 40, 5), "Ann", s.NodeClass("answer"), {}}};
  gt.links = {{0, 1, s.EdgeClass("key-value")}};

  // A detection overlapping ground truth below the threshold becomes "other".
  const auto fp = dg::ProjectGroundTruth({dg::BoundingBox::Make(60, 20, 80, 30)}, gt, 0.5, s);
  const bool other = fp.annotation.entities.size() == 1 &&
                     fp.annotation.entities[0].cls == s.OtherNodeClass();
  // Missing one endpoint drops the link.
  const auto miss = dg::ProjectGroundTruth({gt.entities[0].box}, gt, 0.5, s);
  const bool dropped = miss.annotation.links.empty() && miss.dropped_links == 1;
  // Pairs involving a spurious detection are "none" edges.
  const auto spur = dg::ProjectGroundTruth(
      {gt.entities[0].box, gt.entities[1].box, dg::BoundingBox::Make(60, 20, 80, 30)}, gt, 0.5,
      s);
  const dg::DocumentGraph g = dg::BuildGraph(spur.annotation, s, dg::TextEncoder::Hashing(8), {});
  bool none = true;
  int kv = 0;
  for (const auto& e : g.edges) {
    if (e.src == 2 || e.dst == 2) none = none && e.gt_class == dg::TaskSchema::kNoneEdgeClass;
    kv += *e.gt_class == s.EdgeClass("key-value");
  }
  return {other && dropped && none && kv == 1,
          Fmt("false positive -> other: %s, broken link dropped: %s, spurious pairs none: %s",
              other ? "yes" : "no", dropped ? "yes" : "no", none && kv == 1 ? "yes" : "no")};
}

Outcome TablePipeline() {
  dg::SynthOptions o;
  o.kind = dg::SynthOptions::Kind::kInvoices;
  o.docs = 20;
  o.tables = 2;
  o.seed = 3;
  const dg::TaskSchema s = dg::RvlSchema();
  const auto graphs =
      dg::BuildGraphs(dg::GenerateCorpus(o), s, dg::TextEncoder::Hashing(16), {});
  int bad = 0;
  double min_iou = 1, min_f1 = 1;
  for (const auto& g : graphs) {
    std::vector<int> oracle;
    for (const auto& e : g.edges) oracle.push_back(*e.gt_class);
    const auto regions = dg::ExtractTableRegions(g, oracle, *s.TableEdgeClass());
    if (regions.size() != 2 || g.gt_tables.size() != 2) {
      ++bad;
      continue;
    }
    for (size_t k = 0; k < 2; ++k) {
      double best = 0;
      for (const auto& t : g.gt_tables) best = std::max(best, dg::Iou(regions[k], t));
      min_iou = std::min(min_iou, best);
    }
    min_f1 = std::min(min_f1, dg::DetectionReport(regions, g.gt_tables, 0.5).f1);
  }
  return {bad == 0 && min_iou == 1.0 && min_f1 == 1.0,
          Fmt("%zu documents, %d without exactly 2 regions, min IoU %.4f, min F1 %.4f",
              graphs.size(), bad, min_iou, min_f1)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism() {
  const dg::ModelConfig cfg;
  dg::TrainConfig tc;
  tc.epochs = 4;
  tc.seed = 11;
  const auto graphs = Forms(30, 11, cfg);
  const dg::FoldPlan plan = dg::MakeFolds(Ids(graphs), 3, tc.seed);
  const fs::path root = fs::temp_directory_path() / "docgraph_acceptance_determinism";
  fs::remove_all(root);
  std::string text[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    dg::CrossValidate(graphs, plan, cfg, tc, dg::RunOutput{dir, "snapshot"});
    text[run] = Slurp(dir / "metrics.json");
  }
  const bool same = !text[0].empty() && text[0] == text[1];
  return {same, Fmt("metrics.json %s (%zu bytes)", same ? "identical" : "differs",
                    text[0].size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  spdlog::set_level(spdlog::level::warn);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"gradient_check", GradientCheck},
      {"aggregation_oracle", AggregationOracle},
      {"reduction_to_mean", Reduction},
      {"polar_rotation", PolarRotation},
      {"metric_oracles", MetricOracles},
      {"overfit_one_document", OverfitSanity},
      {"synthetic_end_to_end", EndToEnd},
      {"ablation_ordering", AblationOrdering},
      {"projection_rules", ProjectionRules},
      {"table_pipeline", TablePipeline},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
