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

#include "docgraph/ingest.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "docgraph/common.h"
#include "docgraph/metrics.h"

namespace docgraph {

using nlohmann::json;

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": invalid JSON: " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("failed writing " + path.string());
}

namespace {

BoundingBox BoxFromJson(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(where + ": box must be [x0, y0, x1, y1]");
  }
  try {
    return BoundingBox::Make(j[0].get<double>(), j[1].get<double>(),
                             j[2].get<double>(), j[3].get<double>());
  } catch (const json::exception&) {
    throw Error(where + ": box coordinates must be numbers");
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
}

json BoxToJson(const BoundingBox& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

RawAnnotation ParseDocument(const json& d, const TaskSchema& schema) {
  RawAnnotation ann;
  if (!d.contains("id") || !d["id"].is_string()) {
    throw Error("dataset document without a string \"id\"");
  }
  ann.doc_id = d["id"].get<std::string>();
  const std::string where = "document '" + ann.doc_id + "'";
  if (!d.contains("width") || !d.contains("height") ||
      !d["width"].is_number() || !d["height"].is_number()) {
    throw Error(where + ": missing page dimensions");
  }
  ann.width = d["width"].get<double>();
  ann.height = d["height"].get<double>();
  if (!(ann.width > 0) || !(ann.height > 0)) {
    throw Error(where + ": page dimensions must be positive");
  }

  if (d.contains("entities")) {
    int index = 0;
    for (const json& e : d["entities"]) {
      const std::string ewhere = where + " entity " + std::to_string(index++);
      RawEntity ent;
      ent.box = BoxFromJson(e.value("box", json()), ewhere);
      ent.text = e.value("text", std::string());
      if (e.contains("class") && !e["class"].is_null()) {
        const std::string name = e["class"].get<std::string>();
        auto cls = schema.FindNodeClass(name);
        if (!cls) {
          throw Error(where + ": unknown node class '" + name +
                      "' for schema " + schema.name);
        }
        ent.cls = *cls;
      }
      if (e.contains("visual")) {
        ent.external["visual"] = e["visual"].get<std::vector<double>>();
      }
      ann.entities.push_back(std::move(ent));
    }
  }

  const int n = static_cast<int>(ann.entities.size());
  if (d.contains("links")) {
    for (const json& l : d["links"]) {
      RawLink link;
      link.src = l.at("src").get<int>();
      link.dst = l.at("dst").get<int>();
      const std::string name = l.at("class").get<std::string>();
      auto cls = schema.FindEdgeClass(name);
      if (!cls) {
        throw Error(where + ": unknown edge class '" + name + "' for schema " +
                    schema.name);
      }
      link.cls = *cls;
      if (link.src < 0 || link.src >= n || link.dst < 0 || link.dst >= n) {
        throw Error(where + ": link " + std::to_string(link.src) + "->" +
                    std::to_string(link.dst) + " references a missing entity (" +
                    std::to_string(n) + " entities)");
      }
      if (link.src == link.dst) {
        throw Error(where + ": self-link on entity " + std::to_string(link.src));
      }
      ann.links.push_back(link);
    }
  }

  if (d.contains("regions")) {
    for (const json& r : d["regions"]) {
      RawRegion region;
      region.box = BoxFromJson(r.value("box", json()), where + " region");
      const std::string name = r.at("class").get<std::string>();
      auto cls = schema.FindNodeClass(name);
      if (!cls) {
        throw Error(where + ": unknown region class '" + name +
                    "' for schema " + schema.name);
      }
      region.cls = *cls;
      ann.regions.push_back(region);
    }
  }
  return ann;
}

}  // namespace

std::vector<RawAnnotation> ParseDataset(const json& j,
                                        const TaskSchema& schema) {
  if (!j.is_object() || !j.contains("documents") || !j["documents"].is_array()) {
    throw Error("dataset must be an object with a \"documents\" array");
  }
  std::vector<RawAnnotation> docs;
  std::set<std::string> ids;
  for (const json& d : j["documents"]) {
    try {
      docs.push_back(ParseDocument(d, schema));
    } catch (const json::exception& e) {
      const std::string id = d.is_object() ? d.value("id", std::string("?")) : "?";
      throw Error("document '" + id + "': " + e.what());
    }
    if (!ids.insert(docs.back().doc_id).second) {
      throw Error("duplicate document id '" + docs.back().doc_id + "'");
    }
  }
  return docs;
}

std::vector<RawAnnotation> LoadDataset(const std::filesystem::path& path,
                                       const TaskSchema& schema) {
  if (!std::filesystem::exists(path)) {
    throw Error("dataset " + path.string() + " does not exist");
  }
  return ParseDataset(ReadJsonFile(path), schema);
}

json DatasetToJson(const std::vector<RawAnnotation>& docs,
                   const TaskSchema& schema) {
  json out_docs = json::array();
  for (const RawAnnotation& ann : docs) {
    json d;
    d["id"] = ann.doc_id;
    d["width"] = ann.width;
    d["height"] = ann.height;
    json entities = json::array();
    for (const RawEntity& e : ann.entities) {
      json je;
      je["box"] = BoxToJson(e.box);
      je["text"] = e.text;
      if (e.cls) je["class"] = schema.node_classes.at(*e.cls);
      auto it = e.external.find("visual");
      if (it != e.external.end()) je["visual"] = it->second;
      entities.push_back(std::move(je));
    }
    d["entities"] = std::move(entities);
    json links = json::array();
    for (const RawLink& l : ann.links) {
      links.push_back({{"src", l.src}, {"dst", l.dst},
                       {"class", schema.edge_classes.at(l.cls)}});
    }
    d["links"] = std::move(links);
    if (!ann.regions.empty()) {
      json regions = json::array();
      for (const RawRegion& r : ann.regions) {
        regions.push_back({{"box", BoxToJson(r.box)},
                           {"class", schema.node_classes.at(r.cls)}});
      }
      d["regions"] = std::move(regions);
    }
    out_docs.push_back(std::move(d));
  }
  return json{{"documents", std::move(out_docs)}};
}

void WriteDataset(const std::filesystem::path& path,
                  const std::vector<RawAnnotation>& docs,
                  const TaskSchema& schema) {
  WriteJsonFile(path, DatasetToJson(docs, schema));
}

std::vector<Detections> LoadDetections(const std::filesystem::path& path) {
  const json j = ReadJsonFile(path);
  std::vector<const json*> items;
  if (j.is_array()) {
    for (const json& d : j) items.push_back(&d);
  } else if (j.is_object() && j.contains("detections")) {
    for (const json& d : j["detections"]) items.push_back(&d);
  } else if (j.is_object()) {
    items.push_back(&j);
  } else {
    throw Error(path.string() + ": unrecognized detections layout");
  }
  std::vector<Detections> out;
  for (const json* d : items) {
    Detections det;
    det.doc_id = d->at("id").get<std::string>();
    for (const json& b : d->at("boxes")) {
      det.boxes.push_back(BoxFromJson(b, "detections for '" + det.doc_id + "'"));
    }
    out.push_back(std::move(det));
  }
  return out;
}

ProjectionResult ProjectGroundTruth(const std::vector<BoundingBox>& detections,
                                    const RawAnnotation& gt,
                                    double iou_threshold,
                                    const TaskSchema& schema) {
  if (!(iou_threshold > 0) || iou_threshold > 1) {
    throw Error("IoU threshold must be in (0, 1]");
  }
  ProjectionResult result;
  RawAnnotation& out = result.annotation;
  out.doc_id = gt.doc_id;
  out.width = gt.width;
  out.height = gt.height;
  out.regions = gt.regions;
  if (detections.empty()) {
    spdlog::warn("document '{}': no detections; projected annotation is empty",
                 gt.doc_id);
    result.empty_detections = true;
    result.dropped_links = static_cast<int>(gt.links.size());
    return result;
  }

  struct Candidate {
    double iou;
    int det;
    int ent;
  };
  std::vector<Candidate> candidates;
  for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
    for (int e = 0; e < static_cast<int>(gt.entities.size()); ++e) {
      const BoundingBox& eb = gt.entities[e].box;
      const double score = Iou(detections[d], eb);
      if (score > iou_threshold || detections[d] == eb) {
        candidates.push_back({detections[d] == eb ? 1.0 : score, d, e});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(b.iou, a.det, a.ent) < std::tie(a.iou, b.det, b.ent);
            });
  std::vector<int> det_to_ent(detections.size(), -1);
  std::vector<int> ent_to_det(gt.entities.size(), -1);
  for (const Candidate& c : candidates) {
    if (det_to_ent[c.det] >= 0 || ent_to_det[c.ent] >= 0) continue;
    det_to_ent[c.det] = c.ent;
    ent_to_det[c.ent] = c.det;
    ++result.matched;
  }

  const int other = schema.OtherNodeClass();
  for (size_t d = 0; d < detections.size(); ++d) {
    RawEntity ent;
    ent.box = detections[d];
    if (det_to_ent[d] >= 0) {
      const RawEntity& src = gt.entities[det_to_ent[d]];
      ent.text = src.text;
      ent.cls = src.cls;
      ent.external = src.external;
    } else {
      ent.cls = other;
      ++result.false_positives;
    }
    out.entities.push_back(std::move(ent));
  }
  for (const RawLink& link : gt.links) {
    const int s = ent_to_det[link.src];
    const int t = ent_to_det[link.dst];
    if (s < 0 || t < 0) {
      ++result.dropped_links;
      continue;
    }
    out.links.push_back(RawLink{s, t, link.cls});
  }
  return result;
}

FoldPlan MakeFolds(const std::vector<std::string>& docs, int k,
                   uint64_t seed) {
  if (k < 2) throw Error("fold count must be >= 2");
  if (static_cast<int>(docs.size()) < k) {
    throw Error("cannot make " + std::to_string(k) + " folds from " +
                std::to_string(docs.size()) + " documents");
  }
  FoldPlan plan;
  plan.k = k;
  plan.order = docs;
  std::sort(plan.order.begin(), plan.order.end());
  if (std::adjacent_find(plan.order.begin(), plan.order.end()) != plan.order.end()) {
    throw Error("duplicate document id in fold input");
  }
  Rng rng(seed);
  rng.Shuffle(plan.order);
  for (size_t i = 0; i < plan.order.size(); ++i) {
    plan.assignments[plan.order[i]] = static_cast<int>(i % k);
  }
  return plan;
}

FoldPlan MakeFixedSplit(const std::vector<std::string>& docs,
                        std::array<int, 3> counts, uint64_t seed) {
  for (int c : counts) {
    if (c < 0) throw Error("split sizes must be non-negative");
  }
  if (counts[0] + counts[1] + counts[2] != static_cast<int>(docs.size())) {
    throw Error("split sizes " + std::to_string(counts[0]) + "/" +
                std::to_string(counts[1]) + "/" + std::to_string(counts[2]) +
                " do not sum to " + std::to_string(docs.size()) + " documents");
  }
  FoldPlan plan;
  plan.k = 3;
  plan.fixed_split = counts;
  plan.order = docs;
  std::sort(plan.order.begin(), plan.order.end());
  if (std::adjacent_find(plan.order.begin(), plan.order.end()) != plan.order.end()) {
    throw Error("duplicate document id in split input");
  }
  Rng rng(seed);
  rng.Shuffle(plan.order);
  for (size_t i = 0; i < plan.order.size(); ++i) {
    const int pos = static_cast<int>(i);
    plan.assignments[plan.order[i]] =
        pos < counts[0] ? 0 : (pos < counts[0] + counts[1] ? 1 : 2);
  }
  return plan;
}

FoldSplit SplitForFold(const FoldPlan& plan, int fold, double val_fraction) {
  FoldSplit split;
  if (plan.fixed_split) {
    if (fold != 0) throw Error("a fixed split has a single fold (0)");
    for (const std::string& id : plan.order) {
      const int a = plan.assignments.at(id);
      (a == 0 ? split.train : a == 1 ? split.val : split.test).push_back(id);
    }
    return split;
  }
  if (fold < 0 || fold >= plan.k) {
    throw Error("fold " + std::to_string(fold) + " out of range");
  }
  if (val_fraction < 0 || val_fraction >= 1) {
    throw Error("validation fraction must be in [0, 1)");
  }
  std::vector<std::string> rest;
  for (const std::string& id : plan.order) {
    (plan.assignments.at(id) == fold ? split.test : rest).push_back(id);
  }
  const size_t n_val = static_cast<size_t>(
      std::ceil(val_fraction * static_cast<double>(rest.size())));
  for (size_t i = 0; i < rest.size(); ++i) {
    (i < n_val ? split.val : split.train).push_back(rest[i]);
  }
  return split;
}

json GraphToJson(const DocumentGraph& g) {
  json nodes = json::array();
  for (const DocNode& n : g.nodes) {
    json jn{{"id", n.id}, {"box", BoxToJson(n.box)}, {"text", n.text}};
    jn["gt_class"] = n.gt_class ? json(*n.gt_class) : json(nullptr);
    jn["external"] = n.external_features;
    if (n.features) {
      json b{{"geometric", n.features->geometric},
             {"textual", n.features->textual}};
      if (n.features->visual) b["visual"] = *n.features->visual;
      jn["features"] = std::move(b);
    }
    nodes.push_back(std::move(jn));
  }
  json edges = json::array();
  for (const DocEdge& e : g.edges) {
    json je{{"src", e.src}, {"dst", e.dst}};
    je["gt_class"] = e.gt_class ? json(*e.gt_class) : json(nullptr);
    if (e.features) {
      je["features"] = {{"distance", e.features->distance},
                        {"angle_bin", e.features->angle_bin},
                        {"polar", e.features->polar},
                        {"coincident_centers", e.features->coincident_centers}};
    }
    edges.push_back(std::move(je));
  }
  json tables = json::array();
  for (const BoundingBox& b : g.gt_tables) tables.push_back(BoxToJson(b));
  return json{{"page", {{"width", g.page.width}, {"height", g.page.height},
                        {"doc_id", g.page.doc_id}}},
              {"directed", g.directed},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)},
              {"gt_tables", std::move(tables)}};
}

DocumentGraph GraphFromJson(const json& j) {
  try {
    DocumentGraph g;
    const json& p = j.at("page");
    g.page = Page::Make(p.at("width").get<double>(), p.at("height").get<double>(),
                        p.at("doc_id").get<std::string>());
    g.directed = j.at("directed").get<bool>();
    const std::string where = "graph '" + g.page.doc_id + "'";
    for (const json& jn : j.at("nodes")) {
      DocNode n;
      n.id = jn.at("id").get<int>();
      n.box = BoxFromJson(jn.at("box"), where);
      n.text = jn.at("text").get<std::string>();
      if (!jn.at("gt_class").is_null()) n.gt_class = jn["gt_class"].get<int>();
      n.external_features =
          jn.at("external").get<std::map<std::string, std::vector<double>>>();
      if (jn.contains("features")) {
        FeatureBundle b;
        b.geometric = jn["features"].at("geometric").get<std::vector<double>>();
        b.textual = jn["features"].at("textual").get<std::vector<double>>();
        if (jn["features"].contains("visual")) {
          b.visual = jn["features"]["visual"].get<std::vector<double>>();
        }
        n.features = std::move(b);
      }
      g.nodes.push_back(std::move(n));
    }
    for (const json& je : j.at("edges")) {
      DocEdge e;
      e.src = je.at("src").get<int>();
      e.dst = je.at("dst").get<int>();
      if (!je.at("gt_class").is_null()) e.gt_class = je["gt_class"].get<int>();
      if (je.contains("features")) {
        const json& f = je["features"];
        EdgeFeatures ef;
        ef.distance = f.at("distance").get<double>();
        ef.angle_bin = f.at("angle_bin").get<int>();
        ef.polar = f.at("polar").get<std::vector<double>>();
        ef.coincident_centers = f.at("coincident_centers").get<bool>();
        e.features = std::move(ef);
      }
      g.edges.push_back(std::move(e));
    }
    for (const json& b : j.at("gt_tables")) g.gt_tables.push_back(BoxFromJson(b, where));
    return g;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed graph cache entry: ") + e.what());
  }
}

void SaveGraphCache(const std::filesystem::path& path,
                    const std::vector<DocumentGraph>& graphs,
                    const TaskSchema& schema) {
  json list = json::array();
  for (const DocumentGraph& g : graphs) list.push_back(GraphToJson(g));
  WriteJsonFile(path, json{{"schema", schema.name}, {"graphs", std::move(list)}});
}

std::vector<DocumentGraph> LoadGraphCache(const std::filesystem::path& path,
                                          const TaskSchema& schema) {
  const json j = ReadJsonFile(path);
  if (!j.contains("graphs")) throw Error(path.string() + " is not a graph cache");
  if (j.value("schema", std::string()) != schema.name) {
    throw Error(path.string() + " was built for schema '" +
                j.value("schema", std::string()) + "', expected '" +
                schema.name + "'");
  }
  std::vector<DocumentGraph> graphs;
  for (const json& g : j["graphs"]) graphs.push_back(GraphFromJson(g));
  return graphs;
}

}  // namespace docgraph
