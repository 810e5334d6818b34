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

#include "docgraph/render.h"

#include <cstdio>
#include <map>
#include <sstream>

namespace docgraph {

namespace {

const std::map<std::string, std::string>& Palette() {
  static const std::map<std::string, std::string> p = {
      {"question", "#3b6fd8"},     {"answer", "#3fae49"},
      {"header", "#f2d43c"},       {"supplier", "#f08cc0"},
      {"invoice_info", "#8b5a2b"}, {"receiver", "#2e9d4f"},
      {"table", "#f39c34"},        {"total", "#8fd3f4"},
      {"other", "#9a9a9a"}};
  return p;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string F(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string ClassColor(const TaskSchema& schema, int node_class) {
  const std::string& name = schema.node_classes.at(node_class);
  auto it = Palette().find(name);
  if (it != Palette().end()) return it->second;
  static const char* kSpare[] = {"#c0392b", "#8e44ad", "#16a085", "#d35400"};
  return kSpare[node_class % 4];
}

std::string RenderSvg(const DocumentGraph& graph, const TaskSchema& schema,
                      const RenderLayers& layers) {
  const double w = graph.page.width, h = graph.page.height;
  const double legend_w = 180;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << F(w + legend_w)
     << "\" height=\"" << F(h) << "\" viewBox=\"0 0 " << F(w + legend_w) << ' '
     << F(h) << "\">\n"
     << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" "
        "refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">"
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333333\"/></marker></defs>\n"
     << "<rect class=\"page\" x=\"0\" y=\"0\" width=\"" << F(w)
     << "\" height=\"" << F(h)
     << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";

  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    const DocNode& n = graph.nodes[i];
    const int cls = i < layers.node_class.size() ? layers.node_class[i] : -1;
    const std::string fill = cls >= 0 ? ClassColor(schema, cls) : "none";
    os << "<rect class=\"node\" x=\"" << F(n.box.x0) << "\" y=\""
       << F(n.box.y0) << "\" width=\"" << F(n.box.Width()) << "\" height=\""
       << F(n.box.Height()) << "\" fill=\"" << fill
       << "\" fill-opacity=\"0.45\" stroke=\"" << (cls >= 0 ? fill : "#333333")
       << "\"><title>" << Escape(n.text) << "</title></rect>\n";
  }
  for (const BoundingBox& t : layers.tables) {
    os << "<rect class=\"table\" x=\"" << F(t.x0) << "\" y=\"" << F(t.y0)
       << "\" width=\"" << F(t.Width()) << "\" height=\"" << F(t.Height())
       << "\" fill=\"none\" stroke=\"#00a000\" stroke-width=\"3\"/>\n";
  }
  for (const auto& [s, d] : layers.links) {
    const BoundingBox& a = graph.nodes.at(s).box;
    const BoundingBox& b = graph.nodes.at(d).box;
    os << "<line class=\"link\" x1=\"" << F(a.CenterX()) << "\" y1=\""
       << F(a.CenterY()) << "\" x2=\"" << F(b.CenterX()) << "\" y2=\""
       << F(b.CenterY())
       << "\" stroke=\"#333333\" stroke-width=\"1.5\" "
          "marker-end=\"url(#arrow)\"/>\n"
       << "<circle class=\"src\" cx=\"" << F(a.CenterX()) << "\" cy=\""
       << F(a.CenterY()) << "\" r=\"4\" fill=\"#00b000\"/>\n"
       << "<circle class=\"dst\" cx=\"" << F(b.CenterX()) << "\" cy=\""
       << F(b.CenterY()) << "\" r=\"4\" fill=\"#e00000\"/>\n";
  }
  double ly = 20;
  os << "<g class=\"legend\">\n";
  for (size_t c = 0; c < schema.node_classes.size(); ++c) {
    os << "<rect x=\"" << F(w + 15) << "\" y=\"" << F(ly) << "\" width=\"14\" "
       << "height=\"14\" fill=\"" << ClassColor(schema, static_cast<int>(c))
       << "\"/><text x=\"" << F(w + 36) << "\" y=\"" << F(ly + 12)
       << "\" font-size=\"13\" font-family=\"sans-serif\">"
       << Escape(schema.node_classes[c]) << "</text>\n";
    ly += 22;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace docgraph
