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

#include "docgraph/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace docgraph {

using nlohmann::json;

namespace {

double SafeDiv(double num, double den) { return den > 0 ? num / den : 0.0; }

double F1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

}  // namespace

ClassificationReport ComputeClassificationReport(std::span<const int> pred,
                                                 std::span<const int> gt,
                                                 int num_classes) {
  if (pred.size() != gt.size()) {
    throw Error("classification report: prediction and ground-truth lengths differ");
  }
  if (pred.empty()) throw Error("classification report over zero items");
  if (num_classes < 1) throw Error("classification report needs classes");
  ClassificationReport r;
  r.confusion.assign(num_classes, std::vector<int>(num_classes, 0));
  int correct = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || pred[i] >= num_classes || gt[i] < 0 ||
        gt[i] >= num_classes) {
      throw Error("classification report: class index out of range");
    }
    ++r.confusion[gt[i]][pred[i]];
    if (pred[i] == gt[i]) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  r.micro_f1 = r.accuracy;  // single-label: micro P = micro R = accuracy
  double macro = 0;
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    ClassScores s;
    const int tp = r.confusion[c][c];
    for (int k = 0; k < num_classes; ++k) {
      s.support += r.confusion[c][k];
      s.predicted += r.confusion[k][c];
    }
    s.absent = s.support == 0 && s.predicted == 0;
    s.precision = SafeDiv(tp, s.predicted);
    s.recall = SafeDiv(tp, s.support);
    s.f1 = F1(s.precision, s.recall);
    if (!s.absent) {
      macro += s.f1;
      ++present;
    }
    r.per_class.push_back(s);
  }
  r.macro_f1 = SafeDiv(macro, present);
  return r;
}

double AucPr(std::span<const double> scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) {
    throw Error("auc_pr: score and label lengths differ");
  }
  const size_t total_pos = std::count(positive.begin(), positive.end(), true);
  if (total_pos == 0) throw Error("auc_pr needs at least one positive");
  for (double s : scores) {
    if (std::isnan(s)) throw Error("auc_pr: NaN score");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  double area = 0, prev_recall = 0;
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      positive[order[j]] ? ++tp : ++fp;
      ++j;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return std::clamp(area, 0.0, 1.0);
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = a.IntersectionArea(b);
  const double uni = a.Area() + b.Area() - inter;
  if (!(uni > 0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<BoundingBox> ExtractTableRegions(const DocumentGraph& graph,
                                             std::span<const int> edge_pred,
                                             int table_class) {
  if (edge_pred.size() != graph.edges.size()) {
    throw Error("table extraction: one prediction per edge required");
  }
  const size_t n = graph.nodes.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    if (edge_pred[e] != table_class) continue;
    size_t a = find(graph.edges[e].src), b = find(graph.edges[e].dst);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // root is always the smallest index
  }
  std::vector<std::optional<BoundingBox>> boxes(n);
  std::vector<int> sizes(n, 0);
  for (size_t i = 0; i < n; ++i) {
    const size_t root = find(i);
    const BoundingBox& b = graph.nodes[i].box;
    boxes[root] = boxes[root] ? boxes[root]->Union(b) : b;
    ++sizes[root];
  }
  std::vector<BoundingBox> out;
  for (size_t i = 0; i < n; ++i) {
    if (find(i) == i && sizes[i] >= 2) out.push_back(*boxes[i]);
  }
  return out;
}

DetectionScores DetectionScores::FromCounts(int tp, int fp, int fn,
                                            double iou_threshold) {
  DetectionScores s;
  s.true_positives = tp;
  s.false_positives = fp;
  s.false_negatives = fn;
  s.iou_threshold = iou_threshold;
  if (tp + fp + fn == 0) {
    s.both_empty = true;
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = SafeDiv(tp, tp + fp);
  s.recall = SafeDiv(tp, tp + fn);
  s.f1 = F1(s.precision, s.recall);
  return s;
}

DetectionScores DetectionReport(const std::vector<BoundingBox>& pred,
                                const std::vector<BoundingBox>& gt,
                                double iou_threshold) {
  if (!(iou_threshold > 0) || iou_threshold > 1) {
    throw Error("detection IoU threshold must be in (0, 1]");
  }
  struct Pair {
    double iou;
    size_t p, g;
  };
  std::vector<Pair> pairs;
  for (size_t p = 0; p < pred.size(); ++p) {
    for (size_t g = 0; g < gt.size(); ++g) {
      const double v = Iou(pred[p], gt[g]);
      if (v > iou_threshold) pairs.push_back({v, p, g});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(b.iou, a.p, a.g) < std::tie(a.iou, b.p, b.g);
  });
  std::vector<bool> used_p(pred.size()), used_g(gt.size());
  int tp = 0;
  for (const Pair& pr : pairs) {
    if (used_p[pr.p] || used_g[pr.g]) continue;
    used_p[pr.p] = used_g[pr.g] = true;
    ++tp;
  }
  return DetectionScores::FromCounts(tp, static_cast<int>(pred.size()) - tp,
                                     static_cast<int>(gt.size()) - tp,
                                     iou_threshold);
}

json ReportToJson(const ClassificationReport& r,
                  const std::vector<std::string>& names) {
  json per_class = json::object();
  for (size_t c = 0; c < r.per_class.size(); ++c) {
    const ClassScores& s = r.per_class[c];
    const std::string name = c < names.size() ? names[c] : std::to_string(c);
    per_class[name] = {{"precision", s.precision}, {"recall", s.recall},
                       {"f1", s.f1},               {"support", s.support},
                       {"predicted", s.predicted}, {"absent", s.absent}};
  }
  return json{{"per_class", std::move(per_class)},
              {"micro_f1", r.micro_f1},
              {"macro_f1", r.macro_f1},
              {"accuracy", r.accuracy},
              {"confusion", r.confusion}};
}

json EvalReportToJson(const EvalReport& report, const TaskSchema& schema) {
  json j;
  j["loss"] = report.loss;
  j["nodes"] = report.nodes ? ReportToJson(*report.nodes, schema.node_classes)
                            : json(nullptr);
  j["edges"] = ReportToJson(report.edges, schema.edge_classes);
  j["auc_pr"] = report.auc_pr ? json(*report.auc_pr) : json(nullptr);
  j["auc_pr_class"] = schema.edge_classes.at(report.positive_edge_class);
  if (report.tables) {
    const DetectionScores& t = *report.tables;
    j["table_detection"] = {{"precision", t.precision},
                            {"recall", t.recall},
                            {"f1", t.f1},
                            {"iou_threshold", t.iou_threshold},
                            {"true_positives", t.true_positives},
                            {"false_positives", t.false_positives},
                            {"false_negatives", t.false_negatives},
                            {"both_empty", t.both_empty}};
  } else {
    j["table_detection"] = nullptr;
  }
  return j;
}

std::vector<std::pair<std::string, double>> FlattenReport(
    const EvalReport& report, const TaskSchema& schema) {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("loss", report.loss);
  if (report.nodes) {
    out.emplace_back("node_accuracy", report.nodes->accuracy);
    out.emplace_back("node_micro_f1", report.nodes->micro_f1);
    out.emplace_back("node_macro_f1", report.nodes->macro_f1);
    for (size_t c = 0; c < report.nodes->per_class.size(); ++c) {
      out.emplace_back("node_f1." + schema.node_classes[c],
                       report.nodes->per_class[c].f1);
    }
  }
  out.emplace_back("edge_accuracy", report.edges.accuracy);
  out.emplace_back("edge_macro_f1", report.edges.macro_f1);
  for (size_t c = 0; c < report.edges.per_class.size(); ++c) {
    out.emplace_back("edge_f1." + schema.edge_classes[c],
                     report.edges.per_class[c].f1);
  }
  if (report.auc_pr) out.emplace_back("auc_pr", *report.auc_pr);
  if (report.tables) {
    out.emplace_back("table_precision", report.tables->precision);
    out.emplace_back("table_recall", report.tables->recall);
    out.emplace_back("table_f1", report.tables->f1);
  }
  return out;
}

}  // namespace docgraph
