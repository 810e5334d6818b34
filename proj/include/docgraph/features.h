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

#ifndef DOCGRAPH_FEATURES_H_
#define DOCGRAPH_FEATURES_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docgraph/doc_model.h"

namespace docgraph {

enum class AngleBinning {
  kCentered,  // bin 0 centered on due east
  kFloor,     // bin 0 starts at due east (ablation)
};

struct FeatureOptions {
  int bins = 8;
  AngleBinning binning = AngleBinning::kCentered;
  bool use_visual = false;
};

// [x0/W, y0/H, x1/W, y1/H]. Boxes reaching outside the page are clamped.
std::array<double, 4> GeometricFeatures(const BoundingBox& box,
                                        const Page& page);

// Euclidean gap between two boxes in pixels; 0 when they touch or overlap.
double RawBoxGap(const BoundingBox& a, const BoundingBox& b);

// RawBoxGap divided by the page diagonal, clamped to [0, 1].
double MinBoxDistance(const BoundingBox& a, const BoundingBox& b,
                      const Page& page);

// Bin of an angle in degrees (any real value; wrapped to [0, 360)).
int AngleBin(double degrees, int bins,
             AngleBinning binning = AngleBinning::kCentered);

// Distance plus one-hot angle bin of dst's center seen from src's center.
// The angle is atan2(dy, dx) in image coordinates (y down), so due south is
// 90 degrees. Coincident centers use angle 0 and set coincident_centers.
EdgeFeatures PolarEdgeFeatures(const BoundingBox& src, const BoundingBox& dst,
                               const Page& page, int bins,
                               AngleBinning binning = AngleBinning::kCentered);

// Text to fixed-length vector.
//  - table mode: mean of lower-cased whitespace-token vectors; unknown
//    tokens are skipped, zero vector when nothing is known.
//  - hashing mode: signed character-trigram counts over "#token#" hashed
//    into `dim` buckets, L2-normalized.
class TextEncoder {
 public:
  enum class Mode { kTable, kHashing };

  static TextEncoder Hashing(int dim = 300);
  static TextEncoder FromTable(
      std::unordered_map<std::string, std::vector<double>> table, int dim);

  struct LoadResult;
  // Reads the word2vec text format: header "N D", then "token v1 ... vD".
  static LoadResult LoadWord2Vec(const std::filesystem::path& path);

  std::vector<double> Encode(std::string_view text) const;

  Mode mode() const { return mode_; }
  int dim() const { return dim_; }
  size_t vocabulary_size() const { return table_.size(); }
  const std::vector<double>* Lookup(const std::string& token) const;

 private:
  TextEncoder(Mode mode, int dim) : mode_(mode), dim_(dim) {}

  Mode mode_;
  int dim_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

struct TextEncoder::LoadResult {
  TextEncoder encoder;
  std::vector<std::string> warnings;
};

// Whitespace split after ASCII lower-casing; shared with the embedding export
// tool so both sides of the table format tokenize identically.
std::vector<std::string> TokenizeLower(std::string_view text);

// Fills FeatureBundle on every node and EdgeFeatures on every edge.
// With use_visual, every node must carry an external "visual" vector and all
// of them must have the same length.
DocumentGraph FeaturizeGraph(const DocumentGraph& graph,
                             const TextEncoder& encoder,
                             const FeatureOptions& options);

}  // namespace docgraph

#endif  // DOCGRAPH_FEATURES_H_
