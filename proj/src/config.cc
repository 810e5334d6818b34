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

#include "docgraph/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

namespace docgraph {

namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error("config " + key + ": expected a number, got '" + v + "'");
  }
  return out;
}

int64_t ParseInt(const std::string& key, const std::string& v) {
  int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error("config " + key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

int ParseSmallInt(const std::string& key, const std::string& v) {
  const int64_t x = ParseInt(key, v);
  if (x < INT32_MIN || x > INT32_MAX) {
    throw Error("config " + key + ": value out of range");
  }
  return static_cast<int>(x);
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error("config " + key + ": expected true or false, got '" + v + "'");
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* Bool(bool v) { return v ? "true" : "false"; }

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void RunConfig::Validate() const {
  model.Validate();
  train.Validate();
  if (run_name.empty()) throw Error("config run.name must not be empty");
  ResolveSelectionMetric(train, model.schema);
}

FeatureOptions RunConfig::Features() const {
  FeatureOptions f;
  f.bins = model.bins;
  f.binning = angle_binning;
  f.use_visual = model.use_visual;
  return f;
}

std::vector<std::pair<std::string, std::string>> ParseConfigText(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    std::string s = Trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s[0] == '[') {
      if (s.back() != ']') throw Error(where + "unterminated section header");
      section = Trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw Error(where + "empty section name");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw Error(where + "expected key = value");
    std::string key = Trim(s.substr(0, eq));
    std::string value = Trim(s.substr(eq + 1));
    if (key.empty()) throw Error(where + "empty key");
    if (!value.empty() && value[0] == '"') {
      std::string unq;
      size_t i = 1;
      for (; i < value.size() && value[i] != '"'; ++i) {
        if (value[i] == '\\' && i + 1 < value.size()) ++i;
        unq += value[i];
      }
      if (i >= value.size()) throw Error(where + "unterminated string");
      const std::string rest = Trim(value.substr(i + 1));
      if (!rest.empty() && rest[0] != '#') {
        throw Error(where + "trailing characters after string");
      }
      value = unq;
    } else {
      const size_t hash = value.find(" #");
      if (hash != std::string::npos) value = Trim(value.substr(0, hash));
    }
    if (!section.empty()) key = section + "." + key;
    if (!seen.insert(key).second) throw Error(where + "duplicate key " + key);
    out.emplace_back(key, value);
  }
  return out;
}

void SetConfigValue(RunConfig& c, const std::string& key,
                    const std::string& v) {
  ModelConfig& m = c.model;
  TrainConfig& t = c.train;
  if (key == "data.schema") {
    const bool head = m.schema.use_node_head;
    m.schema = SchemaByName(v);
    m.schema.use_node_head = head;
  } else if (key == "data.text_encoder") {
    c.text_encoder = v;
  } else if (key == "data.angle_binning") {
    if (v == "centered") {
      c.angle_binning = AngleBinning::kCentered;
    } else if (v == "floor") {
      c.angle_binning = AngleBinning::kFloor;
    } else {
      throw Error("config data.angle_binning: expected centered or floor");
    }
  } else if (key == "model.ip_dim") {
    m.ip_dim = ParseSmallInt(key, v);
  } else if (key == "model.ep_inner") {
    m.ep_inner = ParseSmallInt(key, v);
  } else if (key == "model.gnn_layers") {
    m.gnn_layers = ParseSmallInt(key, v);
  } else if (key == "model.threshold") {
    m.threshold = ParseDouble(key, v);
  } else if (key == "model.scale") {
    m.scale = ParseDouble(key, v);
  } else if (key == "model.bins") {
    m.bins = ParseSmallInt(key, v);
  } else if (key == "model.dropout") {
    m.dropout = ParseDouble(key, v);
  } else if (key == "model.use_geometric") {
    m.use_geometric = ParseBool(key, v);
  } else if (key == "model.use_textual") {
    m.use_textual = ParseBool(key, v);
  } else if (key == "model.use_visual") {
    m.use_visual = ParseBool(key, v);
  } else if (key == "model.text_dim") {
    m.text_dim = ParseSmallInt(key, v);
  } else if (key == "model.visual_dim") {
    m.visual_dim = ParseSmallInt(key, v);
  } else if (key == "model.gnn_variant") {
    if (v == "sum") {
      m.gnn_variant = GnnVariant::kSum;
    } else if (v == "concat") {
      m.gnn_variant = GnnVariant::kConcat;
    } else {
      throw Error("config model.gnn_variant: expected sum or concat");
    }
  } else if (key == "model.node_head") {
    m.schema.use_node_head = ParseBool(key, v);
  } else if (key == "train.lr") {
    t.lr = ParseDouble(key, v);
  } else if (key == "train.weight_decay") {
    t.weight_decay = ParseDouble(key, v);
  } else if (key == "train.epochs") {
    t.epochs = ParseSmallInt(key, v);
  } else if (key == "train.seed") {
    const int64_t s = ParseInt(key, v);
    if (s < 0) throw Error("config train.seed must be >= 0");
    t.seed = static_cast<uint64_t>(s);
  } else if (key == "train.edge_weighting") {
    if (v == "inverse_frequency") {
      t.edge_weighting = EdgeWeighting::kInverseFrequency;
    } else if (v == "uniform") {
      t.edge_weighting = EdgeWeighting::kUniform;
    } else {
      throw Error(
          "config train.edge_weighting: expected inverse_frequency or uniform");
    }
  } else if (key == "train.patience") {
    t.patience = ParseSmallInt(key, v);
  } else if (key == "train.selection_metric") {
    t.selection_metric = v;
  } else if (key == "train.val_fraction") {
    t.val_fraction = ParseDouble(key, v);
  } else if (key == "train.folds") {
    t.folds = ParseSmallInt(key, v);
  } else if (key == "run.name") {
    c.run_name = v;
  } else if (key == "run.dir") {
    c.run_dir = v;
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

RunConfig ConfigFromText(const std::string& text,
                         const std::vector<std::string>& overrides) {
  RunConfig c;
  for (const auto& [k, v] : ParseConfigText(text)) SetConfigValue(c, k, v);
  for (const std::string& o : overrides) {
    const size_t eq = o.find('=');
    if (eq == std::string::npos) {
      throw Error("override '" + o + "' is not key=value");
    }
    std::string value = Trim(o.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    SetConfigValue(c, Trim(o.substr(0, eq)), value);
  }
  c.Validate();
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path,
                     const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ConfigFromText(ss.str(), overrides);
}

std::string ConfigSnapshot(const RunConfig& c) {
  const ModelConfig& m = c.model;
  const TrainConfig& t = c.train;
  std::ostringstream os;
  os << "[data]\n"
     << "schema = " << m.schema.name << "\n"
     << "text_encoder = " << Quote(c.text_encoder) << "\n"
     << "angle_binning = "
     << (c.angle_binning == AngleBinning::kCentered ? "centered" : "floor")
     << "\n\n[model]\n"
     << "ip_dim = " << m.ip_dim << "\n"
     << "ep_inner = " << m.ep_inner << "\n"
     << "gnn_layers = " << m.gnn_layers << "\n"
     << "threshold = " << Num(m.threshold) << "\n"
     << "scale = " << Num(m.scale) << "\n"
     << "bins = " << m.bins << "\n"
     << "dropout = " << Num(m.dropout) << "\n"
     << "use_geometric = " << Bool(m.use_geometric) << "\n"
     << "use_textual = " << Bool(m.use_textual) << "\n"
     << "use_visual = " << Bool(m.use_visual) << "\n"
     << "text_dim = " << m.text_dim << "\n"
     << "visual_dim = " << m.visual_dim << "\n"
     << "gnn_variant = "
     << (m.gnn_variant == GnnVariant::kSum ? "sum" : "concat") << "\n"
     << "node_head = " << Bool(m.schema.use_node_head) << "\n\n[train]\n"
     << "lr = " << Num(t.lr) << "\n"
     << "weight_decay = " << Num(t.weight_decay) << "\n"
     << "epochs = " << t.epochs << "\n"
     << "seed = " << t.seed << "\n"
     << "edge_weighting = "
     << (t.edge_weighting == EdgeWeighting::kUniform ? "uniform"
                                                     : "inverse_frequency")
     << "\n"
     << "patience = " << t.patience << "\n"
     << "selection_metric = " << Quote(t.selection_metric) << "\n"
     << "val_fraction = " << Num(t.val_fraction) << "\n"
     << "folds = " << t.folds << "\n\n[run]\n"
     << "name = " << Quote(c.run_name) << "\n"
     << "dir = " << Quote(c.run_dir) << "\n";
  return os.str();
}

void CheckCheckpointCompatible(const std::string& snapshot,
                               const RunConfig& config) {
  RunConfig saved;
  try {
    saved = ConfigFromText(snapshot);
  } catch (const Error& e) {
    throw Error(std::string("checkpoint/config mismatch: unreadable snapshot (") +
                e.what() + ")");
  }
  const auto a = ParseConfigText(ConfigSnapshot(saved));
  const auto b = ParseConfigText(ConfigSnapshot(config));
  for (size_t i = 0; i < a.size(); ++i) {
    const std::string& key = a[i].first;
    if (key.rfind("model.", 0) != 0 && key != "data.schema" &&
        key != "data.angle_binning" && key != "data.text_encoder") {
      continue;
    }
    if (a[i].second != b[i].second) {
      throw Error("checkpoint/config mismatch: " + key + " is " + a[i].second +
                  " in the checkpoint but " + b[i].second + " in the config");
    }
  }
}

TextEncoder MakeTextEncoder(const RunConfig& config) {
  if (config.text_encoder == "hashing") {
    return TextEncoder::Hashing(config.model.text_dim);
  }
  TextEncoder::LoadResult r = TextEncoder::LoadWord2Vec(config.text_encoder);
  for (const std::string& w : r.warnings) spdlog::warn("{}", w);
  if (r.encoder.dim() != config.model.text_dim) {
    throw Error("embedding table " + config.text_encoder + " has dimension " +
                std::to_string(r.encoder.dim()) + " but model.text_dim is " +
                std::to_string(config.model.text_dim));
  }
  return std::move(r.encoder);
}

}  // namespace docgraph
