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

#include "docgraph/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

namespace docgraph {

using nlohmann::json;

void TrainConfig::Validate() const {
  if (!(lr > 0)) throw Error("train.lr must be positive");
  if (weight_decay < 0) throw Error("train.weight_decay must be >= 0");
  if (epochs < 1) throw Error("train.epochs must be >= 1");
  if (patience < 0) throw Error("train.patience must be >= 0");
  if (val_fraction < 0 || val_fraction >= 1) {
    throw Error("train.val_fraction must be in [0, 1)");
  }
  if (folds < 1) throw Error("train.folds must be >= 1");
  static const char* kMetrics[] = {"auto", "kv_f1", "edge_f1", "node_acc",
                                   "loss"};
  if (std::find(std::begin(kMetrics), std::end(kMetrics), selection_metric) ==
      std::end(kMetrics)) {
    throw Error("unknown selection metric '" + selection_metric + "'");
  }
}

std::string ResolveSelectionMetric(const TrainConfig& config,
                                   const TaskSchema& schema) {
  std::string m = config.selection_metric;
  if (m == "edge_f1") m = "kv_f1";
  if (m != "auto") {
    if (m == "node_acc" && !schema.use_node_head) {
      throw Error("selection metric node_acc needs a node head");
    }
    return m;
  }
  if (schema.name == "rvl" && schema.use_node_head) return "node_acc";
  return "kv_f1";
}

JointLoss ComputeJointLoss(Tape& tape, std::optional<Var> node_logits,
                           std::span<const int> node_gt, Var edge_logits,
                           std::span<const int> edge_gt,
                           std::span<const Real> edge_weights,
                           std::span<const Real> node_weights) {
  if (tape.value(edge_logits).rows() == 0 || edge_gt.empty()) {
    throw Error("joint loss: empty edge set");
  }
  JointLoss out;
  Var le = tape.CrossEntropy(edge_logits, edge_gt, edge_weights);
  out.edge = tape.value(le).item();
  if (node_logits) {
    Var ln = tape.CrossEntropy(*node_logits, node_gt, node_weights);
    out.node = tape.value(ln).item();
    out.total = tape.Add(ln, le);
  } else {
    out.total = le;
  }
  return out;
}

std::vector<Real> EdgeClassWeights(const std::vector<GraphInputs>& graphs,
                                   int num_classes, EdgeWeighting mode) {
  std::vector<Real> w(num_classes, 1);
  if (mode == EdgeWeighting::kUniform) return w;
  std::vector<size_t> count(num_classes, 0);
  size_t total = 0;
  for (const GraphInputs& g : graphs) {
    for (int c : g.edge_gt) {
      ++count.at(c);
      ++total;
    }
  }
  for (int c = 0; c < num_classes; ++c) {
    if (count[c] > 0) {
      w[c] = static_cast<Real>(static_cast<double>(total) /
                               (static_cast<double>(num_classes) * count[c]));
    }
  }
  return w;
}

namespace {

// Row-wise softmax in double plus mean -log p[gt] when labels are given.
std::vector<std::vector<double>> Softmax(const Tensor& logits,
                                         std::span<const int> gt,
                                         double* mean_nll) {
  std::vector<std::vector<double>> probs(logits.rows());
  double nll = 0;
  for (size_t r = 0; r < logits.rows(); ++r) {
    const Real* row = logits.row(r);
    double mx = row[0];
    for (size_t c = 1; c < logits.cols(); ++c) mx = std::max<double>(mx, row[c]);
    double z = 0;
    for (size_t c = 0; c < logits.cols(); ++c) z += std::exp(row[c] - mx);
    probs[r].resize(logits.cols());
    for (size_t c = 0; c < logits.cols(); ++c) {
      probs[r][c] = std::exp(row[c] - mx) / z;
    }
    if (!gt.empty()) nll += -(row[gt[r]] - mx - std::log(z));
  }
  if (mean_nll && !gt.empty() && logits.rows() > 0) {
    *mean_nll = nll / static_cast<double>(logits.rows());
  }
  return probs;
}

std::vector<int> Argmax(const std::vector<std::vector<double>>& probs) {
  std::vector<int> out(probs.size());
  for (size_t r = 0; r < probs.size(); ++r) {
    out[r] = static_cast<int>(
        std::max_element(probs[r].begin(), probs[r].end()) - probs[r].begin());
  }
  return out;
}

}  // namespace

DocPrediction Predict(const DocModel& model, const GraphInputs& in) {
  Tape tape(model.params());
  Rng unused(0);
  ForwardOutput fw = model.Forward(tape, in, /*training=*/false, unused);
  DocPrediction p;
  p.doc_id = in.doc_id;
  double loss = 0;
  bool labeled = !in.edge_gt.empty() || in.edge_src.empty();
  if (fw.node_logits) {
    double ln = 0;
    p.node_probs = Softmax(tape.value(*fw.node_logits), in.node_gt, &ln);
    p.node_class = Argmax(p.node_probs);
    loss += ln;
    labeled = labeled && !in.node_gt.empty();
  }
  double le = 0;
  p.edge_probs = Softmax(tape.value(fw.edge_logits), in.edge_gt, &le);
  p.edge_class = Argmax(p.edge_probs);
  p.edge_src = in.edge_src;
  p.edge_dst = in.edge_dst;
  loss += le;
  if (labeled) p.loss = loss;
  return p;
}

std::vector<DocPrediction> PredictAll(const DocModel& model,
                                      const std::vector<GraphInputs>& inputs) {
  std::vector<DocPrediction> out(inputs.size());
  std::vector<std::optional<std::string>> errors(inputs.size());
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = Predict(model, inputs[i]);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& err : errors) {
    if (err) throw Error(*err);
  }
  return out;
}

EvalReport EvaluatePredictions(const std::vector<DocPrediction>& predictions,
                               const std::vector<const DocumentGraph*>& graphs,
                               const TaskSchema& schema,
                               double table_iou_threshold) {
  std::map<std::string, const DocPrediction*> by_id;
  for (const DocPrediction& p : predictions) {
    if (!by_id.emplace(p.doc_id, &p).second) {
      throw Error("duplicate prediction for document '" + p.doc_id + "'");
    }
  }
  const int pos = schema.PositiveEdgeClass();
  const std::optional<int> table = schema.TableEdgeClass();
  std::vector<int> node_pred, node_gt, edge_pred, edge_gt;
  std::vector<double> scores;
  std::vector<bool> positive;
  int tp = 0, fp = 0, fn = 0;
  double loss_sum = 0;
  int loss_count = 0;

  for (const DocumentGraph* g : graphs) {
    auto it = by_id.find(g->page.doc_id);
    if (it == by_id.end()) {
      throw Error("no prediction for document '" + g->page.doc_id + "'");
    }
    const DocPrediction& p = *it->second;
    if (schema.use_node_head) {
      if (p.node_class.size() != g->nodes.size()) {
        throw Error("node count mismatch for document '" + g->page.doc_id +
                    "'");
      }
      for (size_t i = 0; i < g->nodes.size(); ++i) {
        if (!g->nodes[i].gt_class) {
          throw Error("document '" + g->page.doc_id +
                      "' has an unlabeled node");
        }
        node_gt.push_back(*g->nodes[i].gt_class);
        node_pred.push_back(p.node_class[i]);
      }
    }
    if (p.edge_class.size() != g->edges.size()) {
      throw Error("edge count mismatch for document '" + g->page.doc_id + "'");
    }
    for (size_t e = 0; e < g->edges.size(); ++e) {
      const DocEdge& edge = g->edges[e];
      if (p.edge_src[e] != static_cast<uint32_t>(edge.src) ||
          p.edge_dst[e] != static_cast<uint32_t>(edge.dst)) {
        throw Error("edge order mismatch for document '" + g->page.doc_id +
                    "'");
      }
      if (!edge.gt_class) {
        throw Error("document '" + g->page.doc_id + "' has an unlabeled edge");
      }
      edge_gt.push_back(*edge.gt_class);
      edge_pred.push_back(p.edge_class[e]);
      scores.push_back(p.edge_probs[e].at(pos));
      positive.push_back(*edge.gt_class == pos);
    }
    if (table) {
      DetectionScores d = DetectionReport(
          ExtractTableRegions(*g, p.edge_class, *table), g->gt_tables,
          table_iou_threshold);
      tp += d.true_positives;
      fp += d.false_positives;
      fn += d.false_negatives;
    }
    if (p.loss) {
      loss_sum += *p.loss;
      ++loss_count;
    }
  }

  EvalReport r;
  r.positive_edge_class = pos;
  if (schema.use_node_head) {
    r.nodes = ComputeClassificationReport(
        node_pred, node_gt, static_cast<int>(schema.node_classes.size()));
  }
  r.edges = ComputeClassificationReport(
      edge_pred, edge_gt, static_cast<int>(schema.edge_classes.size()));
  if (std::find(positive.begin(), positive.end(), true) != positive.end()) {
    r.auc_pr = AucPr(scores, positive);
  }
  if (table) {
    r.tables = DetectionScores::FromCounts(tp, fp, fn, table_iou_threshold);
  }
  r.loss = loss_count ? loss_sum / loss_count : 0.0;
  return r;
}

EvalReport Evaluate(const DocModel& model,
                    const std::vector<const DocumentGraph*>& graphs) {
  std::vector<GraphInputs> inputs;
  inputs.reserve(graphs.size());
  for (const DocumentGraph* g : graphs) {
    inputs.push_back(MakeGraphInputs(*g, model.config()));
  }
  return EvaluatePredictions(PredictAll(model, inputs), graphs,
                             model.config().schema);
}

double SelectionValue(const EvalReport& report, const std::string& metric) {
  if (metric == "kv_f1" || metric == "edge_f1") return report.PositiveEdgeF1();
  if (metric == "node_acc") return report.NodeAccuracy();
  if (metric == "loss") return -report.loss;
  throw Error("unknown selection metric '" + metric + "'");
}

FoldResult TrainFold(const std::vector<const DocumentGraph*>& train,
                     const std::vector<const DocumentGraph*>& val,
                     const std::vector<const DocumentGraph*>& test,
                     const ModelConfig& model_config,
                     const TrainConfig& tc, int fold,
                     const EpochCallback& on_epoch) {
  tc.Validate();
  model_config.Validate();
  if (train.empty()) {
    throw Error("fold " + std::to_string(fold) + " has an empty train split");
  }
  const TaskSchema& schema = model_config.schema;
  FoldResult result;
  result.fold = fold;
  result.selection_metric = ResolveSelectionMetric(tc, schema);

  const uint64_t base = tc.seed * 0x9E3779B97F4A7C15ULL + 1000003ULL * fold;
  result.model = std::make_unique<DocModel>(model_config, base);
  DocModel& model = *result.model;
  Rng order_rng(base ^ 0x5DEECE66DULL);
  Rng dropout_rng(base ^ 0xB5297A4DULL);

  std::vector<GraphInputs> inputs;
  inputs.reserve(train.size());
  for (const DocumentGraph* g : train) {
    GraphInputs in = MakeGraphInputs(*g, model_config);
    if (in.edge_gt.size() != in.edge_src.size() ||
        (schema.use_node_head && in.node_gt.size() != in.num_nodes)) {
      throw Error("training document '" + in.doc_id + "' is not labeled");
    }
    if (in.edge_src.empty()) {
      spdlog::warn("skipping single-node training document '{}'", in.doc_id);
      continue;
    }
    inputs.push_back(std::move(in));
  }
  if (inputs.empty()) {
    throw Error("fold " + std::to_string(fold) +
                " has no training document with edges");
  }
  const std::vector<Real> weights = EdgeClassWeights(
      inputs, static_cast<int>(schema.edge_classes.size()), tc.edge_weighting);

  std::vector<GraphInputs> val_inputs;
  for (const DocumentGraph* g : val) {
    val_inputs.push_back(MakeGraphInputs(*g, model_config));
  }

  AdamW opt(model.params(), {.lr = tc.lr, .weight_decay = tc.weight_decay});
  std::vector<size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Tensor> best;
  std::optional<double> best_value;
  int since_best = 0;
  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    order_rng.Shuffle(order);
    EpochRecord rec;
    rec.epoch = epoch;
    for (size_t idx : order) {
      const GraphInputs& in = inputs[idx];
      Tape tape(model.params());
      ForwardOutput fw = model.Forward(tape, in, /*training=*/true, dropout_rng);
      JointLoss loss = ComputeJointLoss(tape, fw.node_logits, in.node_gt,
                                        fw.edge_logits, in.edge_gt, weights);
      tape.Backward(loss.total);
      opt.Step(model.params());
      rec.train_loss += tape.value(loss.total).item();
      rec.train_node_loss += loss.node;
      rec.train_edge_loss += loss.edge;
    }
    const double n = static_cast<double>(inputs.size());
    rec.train_loss /= n;
    rec.train_node_loss /= n;
    rec.train_edge_loss /= n;

    bool improved = val.empty();
    if (!val.empty()) {
      EvalReport report =
          EvaluatePredictions(PredictAll(model, val_inputs), val, schema);
      const double v = SelectionValue(report, result.selection_metric);
      rec.val_metric = result.selection_metric == "loss" ? -v : v;
      if (!best_value || v > *best_value) {
        best_value = v;
        improved = true;
        result.val = std::move(report);
      }
    }
    if (improved) {
      result.best_epoch = epoch;
      best.clear();
      for (size_t p = 0; p < model.params().size(); ++p) {
        best.push_back(model.params().value(p));
      }
      since_best = 0;
    } else {
      ++since_best;
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(fold, rec);
    if (tc.patience > 0 && since_best >= tc.patience) break;
  }

  for (size_t p = 0; p < best.size(); ++p) {
    model.params().value(p) = best[p];
  }
  if (best_value) {
    result.best_val_metric =
        result.selection_metric == "loss" ? -*best_value : *best_value;
  }
  result.test = Evaluate(model, test);
  return result;
}

std::vector<MetricSummary> Summarize(const std::vector<const EvalReport*>& reports,
                                     const TaskSchema& schema) {
  std::vector<MetricSummary> out;
  if (reports.empty()) return out;
  std::vector<std::string> names;
  std::map<std::string, std::vector<double>> values;
  for (const EvalReport* r : reports) {
    for (const auto& [name, v] : FlattenReport(*r, schema)) {
      if (!values.count(name)) names.push_back(name);
      values[name].push_back(v);
    }
  }
  for (const std::string& name : names) {
    const std::vector<double>& v = values[name];
    MetricSummary s;
    s.name = name;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(var / static_cast<double>(v.size()));
    out.push_back(s);
  }
  return out;
}

namespace {

json OptionalJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json SummaryJson(const std::vector<MetricSummary>& summary) {
  json j = json::object();
  for (const MetricSummary& s : summary) {
    j[s.name] = {{"mean", s.mean}, {"std", s.std}};
  }
  return j;
}

std::string EpochLine(const EpochRecord& r) {
  std::ostringstream os;
  os.precision(6);
  os << "epoch " << r.epoch << " loss " << r.train_loss << " node "
     << r.train_node_loss << " edge " << r.train_edge_loss;
  if (r.val_metric) os << " val " << *r.val_metric;
  return os.str();
}

}  // namespace

json FoldToJson(const FoldResult& f, const TaskSchema& schema) {
  json history = json::array();
  for (const EpochRecord& r : f.history) {
    history.push_back({{"epoch", r.epoch},
                       {"train_loss", r.train_loss},
                       {"train_node_loss", r.train_node_loss},
                       {"train_edge_loss", r.train_edge_loss},
                       {"val_metric", OptionalJson(r.val_metric)}});
  }
  return {{"fold", f.fold},
          {"selection_metric", f.selection_metric},
          {"best_epoch", f.best_epoch},
          {"best_val_metric", OptionalJson(f.best_val_metric)},
          {"val", f.val ? EvalReportToJson(*f.val, schema) : json(nullptr)},
          {"test", EvalReportToJson(f.test, schema)},
          {"history", history}};
}

json CrossValidationToJson(const CrossValidationResult& r,
                           const TaskSchema& schema) {
  json folds = json::array();
  for (const FoldResult& f : r.folds) folds.push_back(FoldToJson(f, schema));
  return {{"schema", schema.name},
          {"num_folds", r.folds.size()},
          {"test_summary", SummaryJson(r.test_summary)},
          {"folds", folds}};
}

CrossValidationResult CrossValidate(const std::vector<DocumentGraph>& graphs,
                                    const FoldPlan& plan,
                                    const ModelConfig& model_config,
                                    const TrainConfig& tc,
                                    const std::optional<RunOutput>& out,
                                    const EpochCallback& on_epoch) {
  std::map<std::string, const DocumentGraph*> by_id;
  for (const DocumentGraph& g : graphs) by_id[g.page.doc_id] = &g;
  auto lookup = [&](const std::vector<std::string>& ids) {
    std::vector<const DocumentGraph*> v;
    for (const std::string& id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw Error("fold plan names unknown document '" + id + "'");
      }
      v.push_back(it->second);
    }
    return v;
  };

  const int num_folds = plan.fixed_split ? 1 : plan.k;
  CrossValidationResult result;
  for (int k = 0; k < num_folds; ++k) {
    FoldSplit split = SplitForFold(plan, k, tc.val_fraction);
    std::vector<std::string> log_lines;
    auto cb = [&](int fold, const EpochRecord& rec) {
      log_lines.push_back(EpochLine(rec));
      if (on_epoch) on_epoch(fold, rec);
    };
    spdlog::info("fold {}: {} train, {} val, {} test documents", k,
                 split.train.size(), split.val.size(), split.test.size());
    FoldResult fr = TrainFold(lookup(split.train), lookup(split.val),
                              lookup(split.test), model_config, tc, k, cb);
    if (out) {
      const std::filesystem::path dir = out->dir / ("fold" + std::to_string(k));
      std::filesystem::create_directories(dir);
      SaveCheckpoint(dir / "checkpoint.bin", fr.model->params(),
                     out->config_snapshot);
      std::ofstream(dir / "config-snapshot.cfg") << out->config_snapshot;
      WriteJsonFile(dir / "metrics.json", FoldToJson(fr, model_config.schema));
      std::ofstream log(dir / "log.txt");
      for (const std::string& line : log_lines) log << line << '\n';
      log << "selected epoch " << fr.best_epoch << '\n';
    }
    result.folds.push_back(std::move(fr));
  }
  std::vector<const EvalReport*> tests;
  for (const FoldResult& f : result.folds) tests.push_back(&f.test);
  result.test_summary = Summarize(tests, model_config.schema);
  if (out) {
    WriteJsonFile(out->dir / "metrics.json",
                  CrossValidationToJson(result, model_config.schema));
  }
  return result;
}

}  // namespace docgraph
