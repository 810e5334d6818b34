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

#include "docgraph/features.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace docgraph {

std::array<double, 4> GeometricFeatures(const BoundingBox& box,
                                        const Page& page) {
  if (!(page.width > 0) || !(page.height > 0)) {
    throw Error("page '" + page.doc_id + "' has a zero dimension");
  }
  BoundingBox b = box;
  if (b.x1 > page.width || b.y1 > page.height) {
    spdlog::warn("document '{}': box [{}, {}, {}, {}] exceeds page {}x{}; clamped",
                 page.doc_id, b.x0, b.y0, b.x1, b.y1, page.width, page.height);
    b.x0 = std::min(b.x0, page.width);
    b.x1 = std::min(b.x1, page.width);
    b.y0 = std::min(b.y0, page.height);
    b.y1 = std::min(b.y1, page.height);
  }
  return {b.x0 / page.width, b.y0 / page.height, b.x1 / page.width,
          b.y1 / page.height};
}

double RawBoxGap(const BoundingBox& a, const BoundingBox& b) {
  const double dx = std::max({0.0, a.x0 - b.x1, b.x0 - a.x1});
  const double dy = std::max({0.0, a.y0 - b.y1, b.y0 - a.y1});
  return std::sqrt(dx * dx + dy * dy);
}

double MinBoxDistance(const BoundingBox& a, const BoundingBox& b,
                      const Page& page) {
  const double diag = std::hypot(page.width, page.height);
  if (!(diag > 0)) throw Error("page '" + page.doc_id + "' has zero size");
  return std::clamp(RawBoxGap(a, b) / diag, 0.0, 1.0);
}

int AngleBin(double degrees, int bins, AngleBinning binning) {
  if (bins < 2) throw Error("angle bins must be >= 2");
  const double width = 360.0 / bins;
  const double offset = binning == AngleBinning::kCentered ? width / 2 : 0.0;
  double shifted = std::fmod(degrees + offset, 360.0);
  if (shifted < 0) shifted += 360.0;
  const int bin = static_cast<int>(std::floor(shifted / width));
  return std::clamp(bin, 0, bins - 1);
}

EdgeFeatures PolarEdgeFeatures(const BoundingBox& src, const BoundingBox& dst,
                               const Page& page, int bins,
                               AngleBinning binning) {
  EdgeFeatures f;
  f.distance = MinBoxDistance(src, dst, page);
  const double dx = dst.CenterX() - src.CenterX();
  const double dy = dst.CenterY() - src.CenterY();
  double degrees = 0;
  if (dx == 0 && dy == 0) {
    f.coincident_centers = true;
  } else {
    degrees = std::atan2(dy, dx) * 180.0 / M_PI;
    if (degrees < 0) degrees += 360.0;
  }
  f.angle_bin = AngleBin(degrees, bins, binning);
  f.polar.assign(1 + bins, 0.0);
  f.polar[0] = f.distance;
  f.polar[1 + f.angle_bin] = 1.0;
  return f;
}

std::vector<std::string> TokenizeLower(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TextEncoder TextEncoder::Hashing(int dim) {
  if (dim < 1) throw Error("text dimension must be >= 1");
  return TextEncoder(Mode::kHashing, dim);
}

TextEncoder TextEncoder::FromTable(
    std::unordered_map<std::string, std::vector<double>> table, int dim) {
  if (dim < 1) throw Error("text dimension must be >= 1");
  for (const auto& [token, vec] : table) {
    if (static_cast<int>(vec.size()) != dim) {
      throw Error("embedding for '" + token + "' has length " +
                  std::to_string(vec.size()) + ", expected " +
                  std::to_string(dim));
    }
  }
  TextEncoder enc(Mode::kTable, dim);
  enc.table_ = std::move(table);
  return enc;
}

TextEncoder::LoadResult TextEncoder::LoadWord2Vec(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty embedding table " + path.string());
  std::istringstream header(line);
  long declared = 0;
  int dim = 0;
  if (!(header >> declared >> dim) || declared < 0 || dim < 1) {
    throw Error("bad embedding table header '" + line + "' in " + path.string());
  }
  std::unordered_map<std::string, std::vector<double>> table;
  std::vector<std::string> warnings;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> vec;
    vec.reserve(dim);
    double v;
    while (row >> v) vec.push_back(v);
    if (!row.eof() || static_cast<int>(vec.size()) != dim) {
      warnings.push_back("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(dim) + " values for '" + token + "'");
      continue;
    }
    if (!table.emplace(token, std::move(vec)).second) {
      warnings.push_back("line " + std::to_string(line_no) +
                         ": duplicate token '" + token + "'");
    }
  }
  if (static_cast<long>(table.size()) + static_cast<long>(warnings.size()) !=
      declared) {
    warnings.push_back("header declares " + std::to_string(declared) +
                       " rows, found " + std::to_string(table.size()));
  }
  for (const std::string& w : warnings) {
    spdlog::warn("{}: {}", path.string(), w);
  }
  return LoadResult{FromTable(std::move(table), dim), std::move(warnings)};
}

const std::vector<double>* TextEncoder::Lookup(const std::string& token) const {
  auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

namespace {

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<double> TextEncoder::Encode(std::string_view text) const {
  std::vector<double> out(dim_, 0.0);
  if (mode_ == Mode::kTable) {
    int known = 0;
    for (const std::string& token : TokenizeLower(text)) {
      const std::vector<double>* vec = Lookup(token);
      if (!vec) continue;
      for (int i = 0; i < dim_; ++i) out[i] += (*vec)[i];
      ++known;
    }
    if (known > 0) {
      for (double& v : out) v /= known;
    }
    return out;
  }

  // Hashing: case is kept, it separates e.g. headers from body text.
  std::string_view rest = text;
  while (!rest.empty()) {
    size_t start = 0;
    while (start < rest.size() &&
           std::isspace(static_cast<unsigned char>(rest[start]))) {
      ++start;
    }
    size_t end = start;
    while (end < rest.size() &&
           !std::isspace(static_cast<unsigned char>(rest[end]))) {
      ++end;
    }
    if (end > start) {
      const std::string padded = "#" + std::string(rest.substr(start, end - start)) + "#";
      for (size_t i = 0; i + 3 <= padded.size(); ++i) {
        const uint64_t h = Fnv1a(std::string_view(padded).substr(i, 3));
        const size_t bucket = static_cast<size_t>((h & 0x7fffffffffffffffull) % dim_);
        out[bucket] += (h >> 63) ? -1.0 : 1.0;
      }
    }
    rest = rest.substr(end);
  }
  double norm = 0;
  for (double v : out) norm += v * v;
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (double& v : out) v /= norm;
  }
  return out;
}

DocumentGraph FeaturizeGraph(const DocumentGraph& graph,
                             const TextEncoder& encoder,
                             const FeatureOptions& options) {
  if (options.bins < 2) throw Error("angle bins must be >= 2");
  DocumentGraph out = graph;
  std::optional<size_t> visual_dim;
  for (DocNode& node : out.nodes) {
    FeatureBundle& bundle = node.features.emplace();
    const auto geo = GeometricFeatures(node.box, out.page);
    bundle.geometric.assign(geo.begin(), geo.end());
    bundle.textual = encoder.Encode(node.text);
    if (options.use_visual) {
      auto it = node.external_features.find("visual");
      if (it == node.external_features.end()) {
        throw Error("document '" + out.page.doc_id + "': node " +
                    std::to_string(node.id) + " has no visual feature vector");
      }
      if (!visual_dim) visual_dim = it->second.size();
      if (it->second.size() != *visual_dim) {
        throw Error("document '" + out.page.doc_id + "': node " +
                    std::to_string(node.id) + " visual vector has length " +
                    std::to_string(it->second.size()) + ", expected " +
                    std::to_string(*visual_dim));
      }
      bundle.visual = it->second;
    }
  }
  for (DocEdge& edge : out.edges) {
    edge.features = PolarEdgeFeatures(out.nodes.at(edge.src).box,
                                      out.nodes.at(edge.dst).box, out.page,
                                      options.bins, options.binning);
  }
  return out;
}

}  // namespace docgraph
