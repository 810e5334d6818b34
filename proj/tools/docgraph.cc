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

// Command-line front end: synth, build, train, predict, eval, render.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "docgraph/graph_builder.h"
#include "docgraph/pipeline.h"
#include "docgraph/synth.h"

namespace dg = docgraph;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "Config file (key = value)");
  cmd->add_option("--set", c.overrides, "Override a config key, e.g. train.epochs=5");
}

dg::RunConfig Config(const Common& c) {
  if (c.config.empty()) return dg::ConfigFromText("", c.overrides);
  return dg::LoadConfig(c.config, c.overrides);
}

std::vector<const dg::DocumentGraph*> Pointers(
    const std::vector<dg::DocumentGraph>& graphs) {
  std::vector<const dg::DocumentGraph*> out;
  for (const auto& g : graphs) out.push_back(&g);
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw dg::Error("cannot write " + path.string());
  out << text;
}

std::array<int, 3> ParseSplit(const std::string& s) {
  std::array<int, 3> out{};
  if (std::sscanf(s.c_str(), "%d,%d,%d", &out[0], &out[1], &out[2]) != 3) {
    throw dg::Error("--split expects train,val,test counts");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph neural networks over document entities"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  // synth
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  std::string synth_kind = "forms", synth_out;
  dg::SynthOptions synth_opt;
  synth->add_option("--kind", synth_kind, "forms or invoices")
      ->check(CLI::IsMember({"forms", "invoices"}));
  synth->add_option("--docs", synth_opt.docs, "Number of documents");
  synth->add_option("--seed", synth_opt.seed, "Random seed");
  synth->add_option("--tables", synth_opt.tables, "Tables per invoice");
  synth->add_option("--min-pairs", synth_opt.min_pairs, "Fewest key-value rows per form");
  synth->add_option("--max-pairs", synth_opt.max_pairs, "Most key-value rows per form");
  synth->add_option("-o,--out", synth_out, "Dataset file")->required();

  // build
  Common build_c;
  CLI::App* build = app.add_subcommand("build", "Dataset to featurized graph cache");
  AddCommon(build, build_c);
  std::string build_data, build_det, build_out;
  double build_iou = 0.5;
  build->add_option("-d,--data", build_data, "Dataset file")->required();
  build->add_option("--detections", build_det,
                    "Detector boxes; ground truth is projected onto them");
  build->add_option("--iou", build_iou, "Projection IoU threshold");
  build->add_option("-o,--out", build_out, "Graph cache file")->required();

  // train
  Common train_c;
  CLI::App* train = app.add_subcommand("train", "Cross-validated training");
  AddCommon(train, train_c);
  std::string train_data, train_split;
  train->add_option("-d,--data", train_data, "Dataset or graph cache")->required();
  train->add_option("--split", train_split,
                    "Fixed train,val,test document counts instead of k folds");

  // predict
  Common pred_c;
  CLI::App* predict = app.add_subcommand("predict", "Checkpoint + documents to predictions");
  AddCommon(predict, pred_c);
  std::string pred_ckpt, pred_data, pred_out;
  predict->add_option("--checkpoint", pred_ckpt, "Checkpoint file")->required();
  predict->add_option("-d,--data", pred_data, "Dataset or graph cache")->required();
  predict->add_option("-o,--out", pred_out, "Predictions file (JSON Lines)")->required();

  // eval
  Common eval_c;
  CLI::App* eval = app.add_subcommand("eval", "Score a checkpoint or a predictions file");
  AddCommon(eval, eval_c);
  std::string eval_ckpt, eval_pred, eval_data, eval_out;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file");
  eval->add_option("--predictions", eval_pred, "Predictions file");
  eval->add_option("-d,--data", eval_data, "Labeled dataset or graph cache")->required();
  eval->add_option("-o,--out", eval_out, "Write the report as JSON");

  // render
  Common render_c;
  CLI::App* render = app.add_subcommand("render", "SVG overlays");
  AddCommon(render, render_c);
  std::string render_data, render_pred, render_dir;
  render->add_option("-d,--data", render_data, "Dataset or graph cache")->required();
  render->add_option("--predictions", render_pred,
                     "Predictions file; ground truth is drawn without it");
  render->add_option("-o,--out-dir", render_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*synth) {
      synth_opt.kind = synth_kind == "forms" ? dg::SynthOptions::Kind::kForms
                                             : dg::SynthOptions::Kind::kInvoices;
      const dg::TaskSchema schema =
          synth_kind == "forms" ? dg::FunsdSchema() : dg::RvlSchema();
      dg::WriteDataset(synth_out, dg::GenerateCorpus(synth_opt), schema);
    } else if (*build) {
      const dg::RunConfig cfg = Config(build_c);
      const dg::TaskSchema& schema = cfg.model.schema;
      std::vector<dg::RawAnnotation> docs = dg::LoadDataset(build_data, schema);
      if (!build_det.empty()) {
        std::map<std::string, std::vector<dg::BoundingBox>> dets;
        for (auto& d : dg::LoadDetections(build_det)) dets[d.doc_id] = d.boxes;
        for (auto& doc : docs) {
          auto it = dets.find(doc.doc_id);
          if (it == dets.end()) {
            throw dg::Error("no detections for document '" + doc.doc_id + "'");
          }
          doc = dg::ProjectGroundTruth(it->second, doc, build_iou, schema).annotation;
        }
      }
      docs = dg::DropEmptyDocuments(std::move(docs));
      dg::SaveGraphCache(build_out,
                         dg::BuildGraphs(docs, schema, dg::MakeTextEncoder(cfg),
                                         cfg.Features()),
                         schema);
      WriteText(build_out + ".config", dg::ConfigSnapshot(cfg));
    } else if (*train) {
      const dg::RunConfig cfg = Config(train_c);
      const std::vector<dg::DocumentGraph> graphs = dg::LoadGraphs(train_data, cfg);
      std::vector<std::string> ids;
      for (const auto& g : graphs) ids.push_back(g.page.doc_id);
      const dg::FoldPlan plan =
          train_split.empty()
              ? dg::MakeFolds(ids, cfg.train.folds, cfg.train.seed)
              : dg::MakeFixedSplit(ids, ParseSplit(train_split), cfg.train.seed);
      std::filesystem::create_directories(cfg.RunPath());
      const std::string snapshot = dg::ConfigSnapshot(cfg);
      WriteText(cfg.RunPath() / "config-snapshot.cfg", snapshot);
      const dg::CrossValidationResult r = dg::CrossValidate(
          graphs, plan, cfg.model, cfg.train, dg::RunOutput{cfg.RunPath(), snapshot},
          [](int fold, const dg::EpochRecord& e) {
            spdlog::debug("fold {} epoch {} loss {:.5f}", fold, e.epoch, e.train_loss);
          });
      for (const dg::MetricSummary& s : r.test_summary) {
        std::printf("%-28s %.4f +- %.4f\n", s.name.c_str(), s.mean, s.std);
      }
    } else if (*predict) {
      const dg::RunConfig cfg = Config(pred_c);
      auto model = dg::LoadModel(pred_ckpt, cfg);
      const auto graphs = dg::LoadGraphs(pred_data, cfg);
      std::vector<dg::GraphInputs> inputs;
      for (const auto& g : graphs) inputs.push_back(dg::MakeGraphInputs(g, cfg.model));
      dg::WritePredictions(pred_out, dg::PredictAll(*model, inputs), cfg.model.schema);
    } else if (*eval) {
      const dg::RunConfig cfg = Config(eval_c);
      if (eval_ckpt.empty() == eval_pred.empty()) {
        throw dg::Error("eval needs exactly one of --checkpoint or --predictions");
      }
      const auto graphs = dg::LoadGraphs(eval_data, cfg);
      const dg::EvalReport report =
          eval_pred.empty()
              ? dg::Evaluate(*dg::LoadModel(eval_ckpt, cfg), Pointers(graphs))
              : dg::EvaluatePredictions(
                    dg::LoadPredictions(eval_pred, cfg.model.schema),
                    Pointers(graphs), cfg.model.schema);
      for (const auto& [name, v] : dg::FlattenReport(report, cfg.model.schema)) {
        std::printf("%-28s %.4f\n", name.c_str(), v);
      }
      if (!eval_out.empty()) {
        dg::WriteJsonFile(eval_out, dg::EvalReportToJson(report, cfg.model.schema));
      }
    } else if (*render) {
      const dg::RunConfig cfg = Config(render_c);
      const dg::TaskSchema& schema = cfg.model.schema;
      const auto graphs = dg::LoadGraphs(render_data, cfg);
      std::map<std::string, dg::DocPrediction> preds;
      if (!render_pred.empty()) {
        for (auto& p : dg::LoadPredictions(render_pred, schema)) {
          preds[p.doc_id] = std::move(p);
        }
      }
      std::filesystem::create_directories(render_dir);
      for (const auto& g : graphs) {
        dg::RenderLayers layers;
        if (render_pred.empty()) {
          layers = dg::GroundTruthLayers(g, schema);
        } else {
          auto it = preds.find(g.page.doc_id);
          if (it == preds.end()) {
            throw dg::Error("no prediction for document '" + g.page.doc_id + "'");
          }
          layers = dg::PredictionLayers(g, it->second, schema);
        }
        WriteText(std::filesystem::path(render_dir) / (g.page.doc_id + ".svg"),
                  dg::RenderSvg(g, schema, layers));
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "docgraph: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
