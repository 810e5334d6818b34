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

#include "docgraph/synth.h"

#include <algorithm>
#include <cstdio>

namespace docgraph {

namespace {

const std::vector<std::string> kHeaders = {
    "APPLICATION FORM",     "REGISTRATION",         "CUSTOMER DETAILS",
    "EMPLOYEE RECORD",      "ORDER REQUEST",        "CLAIM FORM",
    "MEMBERSHIP FORM",      "SHIPPING DETAILS",     "PATIENT INTAKE",
    "VENDOR INFORMATION"};

const std::vector<std::string> kSubHeaders = {
    "Section A", "Personal Data", "Part 1", "General", "Contact"};

const std::vector<std::string> kQuestions = {
    "Name:",        "Date:",        "Phone:",       "Address:",
    "City:",        "Company:",     "Email:",       "Account No:",
    "Reference:",   "Department:",  "Signature:",   "Amount:",
    "Zip Code:",    "Country:",     "Title:",       "Fax:",
    "Brand:",       "Quantity:",    "Start Date:",  "Approved By:"};

const std::vector<std::string> kFirstNames = {
    "John", "Mary", "Peter", "Linda", "James", "Susan", "Robert", "Karen",
    "Paul", "Nancy", "Mark", "Laura"};
const std::vector<std::string> kLastNames = {
    "Smith", "Brown", "Miller", "Wilson", "Taylor", "Clark", "Lewis",
    "Walker", "Young", "Hall", "Allen", "King"};
const std::vector<std::string> kCities = {
    "Boston", "Denver", "Austin", "Seattle", "Chicago", "Phoenix", "Atlanta",
    "Portland"};
const std::vector<std::string> kStreets = {"Main St", "Oak Ave", "Park Rd",
                                           "Elm St", "Lake Dr", "Hill Rd"};

const std::vector<std::string> kOthers = {
    "Confidential",      "Office use only",  "See instructions",
    "Rev 3",             "Do not write here", "Internal",
    "Continued overleaf", "Keep a copy",      "Form 7B",
    "Draft",             "Received",         "Checked",
    "Return to sender",  "Processed",        "Void if altered",
    "Page one",          "Archive",          "Attachment"};

const std::vector<std::string> kCompanies = {
    "Acme Supplies Ltd", "Global Parts Inc", "Northwind Traders",
    "Bluewater Co",      "Summit Tools",     "Redline Logistics",
    "Vertex Paper",      "Orion Foods"};
const std::vector<std::string> kItems = {
    "Paper A4", "Toner", "Stapler", "Desk lamp", "Cable", "Folder",
    "Monitor",  "Chair", "Pens",    "Labels",    "Binder", "Tape"};
const std::vector<std::string> kFooters = {
    "Thank you for your business", "Payment due in 30 days",
    "Questions? Call our office",  "Registered in England",
    "Bank transfer preferred"};

std::string Digits(Rng& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + rng.Int(0, 9));
  return s;
}

std::string DateText(Rng& rng) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d",
                static_cast<int>(rng.Int(1, 28)),
                static_cast<int>(rng.Int(1, 12)),
                static_cast<int>(rng.Int(1990, 2024)));
  return buf;
}

std::string Money(Rng& rng) {
  return "$" + std::to_string(rng.Int(10, 9999)) + "." + Digits(rng, 2);
}

std::string AnswerText(Rng& rng) {
  switch (rng.Int(0, 5)) {
    case 0:
      return rng.Pick(kFirstNames) + " " + rng.Pick(kLastNames);
    case 1:
      return DateText(rng);
    case 2:
      return Digits(rng, static_cast<int>(rng.Int(3, 7)));
    case 3:
      return rng.Pick(kCities);
    case 4:
      return Digits(rng, 3) + " " + rng.Pick(kStreets);
    default:
      return Money(rng);
  }
}

struct Layout {
  double char_w;
  double line_h;
  BoundingBox Box(double x, double y, const std::string& text) const {
    return BoundingBox::Make(x, y, x + char_w * text.size(), y + line_h);
  }
};

RawEntity Entity(const BoundingBox& box, std::string text, int cls) {
  RawEntity e;
  e.box = box;
  e.text = std::move(text);
  e.cls = cls;
  return e;
}

RawAnnotation MakeForm(Rng& rng, const SynthOptions& opt, std::string id) {
  const TaskSchema schema = FunsdSchema();
  const int q_cls = schema.NodeClass("question");
  const int a_cls = schema.NodeClass("answer");
  const int h_cls = schema.NodeClass("header");
  const int o_cls = schema.NodeClass("other");
  const int kv = schema.EdgeClass("key-value");

  RawAnnotation doc;
  doc.doc_id = std::move(id);
  doc.width = 1000;
  doc.height = 1300;
  Layout lay{rng.Uniform(6.0, 9.0), rng.Uniform(14.0, 20.0)};

  const std::string header = rng.Pick(kHeaders);
  double y = rng.Uniform(40, 80);
  const double hx = (doc.width - lay.char_w * header.size()) / 2 +
                    rng.Uniform(-60, 60);
  doc.entities.push_back(Entity(lay.Box(hx, y, header), header, h_cls));
  y += lay.line_h;
  if (rng.Bernoulli(0.5)) {
    const std::string sub = rng.Pick(kSubHeaders);
    y += rng.Uniform(8, 16);
    const double sx = rng.Uniform(40, 120);
    doc.entities.push_back(Entity(lay.Box(sx, y, sub), sub, h_cls));
    y += lay.line_h;
  }

  // Rows: true = question/answer, false = other/other.
  const int pairs = static_cast<int>(rng.Int(opt.min_pairs, opt.max_pairs));
  std::vector<bool> rows(pairs, true);
  for (int i = 0; i < pairs; ++i) {
    if (rng.Bernoulli(1.0 / 3.0)) rows.push_back(false);
  }
  rng.Shuffle(rows);

  const bool two_columns = rows.size() >= 4 && rng.Bernoulli(0.25);
  const double gap = two_columns ? rng.Uniform(15, 80) : rng.Uniform(15, 250);
  const double pitch = lay.line_h + rng.Uniform(15, 35);
  const double left = rng.Uniform(40, 120);
  const double top = y + rng.Uniform(30, 60);
  const size_t per_column = two_columns ? (rows.size() + 1) / 2 : rows.size();

  std::vector<std::string> lefts(rows.size()), rights(rows.size());
  std::vector<std::string> pool = kQuestions;
  rng.Shuffle(pool);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r]) {
      lefts[r] = pool[r % pool.size()];
      rights[r] = AnswerText(rng);
    } else {
      lefts[r] = rng.Pick(kOthers);
      rights[r] = rng.Pick(kOthers);
    }
  }
  // Answers start in a common column per block of rows.
  for (size_t start = 0; start < rows.size(); start += per_column) {
    const size_t end = std::min(rows.size(), start + per_column);
    const double x0 = left + (start == 0 ? 0.0 : 470.0);
    double widest = 0;
    for (size_t r = start; r < end; ++r) {
      widest = std::max(widest, lay.char_w * lefts[r].size());
    }
    const double ax = x0 + widest + gap;
    for (size_t r = start; r < end; ++r) {
      const double ry = top + pitch * static_cast<double>(r - start);
      const int li = static_cast<int>(doc.entities.size());
      doc.entities.push_back(Entity(lay.Box(x0, ry, lefts[r]), lefts[r],
                                    rows[r] ? q_cls : o_cls));
      doc.entities.push_back(Entity(lay.Box(ax, ry, rights[r]), rights[r],
                                    rows[r] ? a_cls : o_cls));
      if (rows[r]) doc.links.push_back({li, li + 1, kv});
    }
  }
  if (rng.Bernoulli(0.5)) {
    const std::string footer = rng.Pick(kOthers);
    doc.entities.push_back(Entity(
        lay.Box(rng.Uniform(40, 600), doc.height - rng.Uniform(40, 80), footer),
        footer, o_cls));
  }
  return doc;
}

RawAnnotation MakeInvoice(Rng& rng, const SynthOptions& opt, std::string id) {
  const TaskSchema schema = RvlSchema();
  const int supplier = schema.NodeClass("supplier");
  const int info = schema.NodeClass("invoice_info");
  const int receiver = schema.NodeClass("receiver");
  const int table = schema.NodeClass("table");
  const int total = schema.NodeClass("total");
  const int other = schema.NodeClass("other");

  RawAnnotation doc;
  doc.doc_id = std::move(id);
  doc.width = 1000;
  doc.height = 1400;
  Layout lay{rng.Uniform(6.0, 8.5), rng.Uniform(14.0, 18.0)};
  const double lead = lay.line_h + rng.Uniform(4, 8);
  auto add = [&](double x, double y, const std::string& text, int cls) {
    doc.entities.push_back(Entity(lay.Box(x, y, text), text, cls));
  };

  const double margin = rng.Uniform(40, 90);
  double y = rng.Uniform(40, 80);
  add(margin, y, rng.Pick(kCompanies), supplier);
  add(margin, y + lead, Digits(rng, 3) + " " + rng.Pick(kStreets), supplier);
  add(margin, y + 2 * lead, rng.Pick(kCities), supplier);

  const double ix = rng.Uniform(620, 700);
  add(ix, y, "Invoice No " + Digits(rng, 5), info);
  add(ix, y + lead, "Date " + DateText(rng), info);
  if (rng.Bernoulli(0.5)) add(ix, y + 2 * lead, "Terms 30 days", info);

  y += 3 * lead + rng.Uniform(40, 80);
  add(margin, y, "Bill to", receiver);
  add(margin, y + lead, rng.Pick(kFirstNames) + " " + rng.Pick(kLastNames),
      receiver);
  add(margin, y + 2 * lead, Digits(rng, 3) + " " + rng.Pick(kStreets),
      receiver);
  y += 3 * lead + rng.Uniform(40, 70);

  const std::vector<std::string> heads = {"Description", "Qty", "Price",
                                          "Amount"};
  for (int t = 0; t < opt.tables; ++t) {
    const int cols = static_cast<int>(rng.Int(3, 4));
    const int item_rows = static_cast<int>(rng.Int(2, 4));
    const double col_w = rng.Uniform(150, 200);
    const size_t first = doc.entities.size();
    for (int r = 0; r <= item_rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        std::string text;
        if (r == 0) {
          text = heads[c == 0 ? 0 : c + (4 - cols)];
        } else if (c == 0) {
          text = rng.Pick(kItems);
        } else if (c == 1 && cols == 4) {
          text = std::to_string(rng.Int(1, 20));
        } else {
          text = Money(rng);
        }
        add(margin + c * col_w, y + r * lead, text, table);
      }
    }
    BoundingBox region = doc.entities[first].box;
    for (size_t i = first + 1; i < doc.entities.size(); ++i) {
      region = region.Union(doc.entities[i].box);
    }
    doc.regions.push_back({region, table});
    y += (item_rows + 1) * lead + rng.Uniform(50, 90);
  }

  const double tx = rng.Uniform(600, 680);
  add(tx, y, "Total", total);
  add(tx + 90, y, Money(rng), total);
  y += lead + rng.Uniform(40, 80);
  add(margin, std::min(y + rng.Uniform(100, 300), doc.height - 60),
      rng.Pick(kFooters), other);
  if (rng.Bernoulli(0.5)) {
    add(doc.width - 160, doc.height - rng.Uniform(40, 60), "Page 1", other);
  }
  return doc;
}

}  // namespace

std::vector<RawAnnotation> GenerateCorpus(const SynthOptions& opt) {
  if (opt.docs < 0) throw Error("synth: docs must be >= 0");
  if (opt.min_pairs < 1 || opt.max_pairs < opt.min_pairs) {
    throw Error("synth: need 1 <= min_pairs <= max_pairs");
  }
  if (opt.tables < 0) throw Error("synth: tables must be >= 0");
  std::vector<RawAnnotation> out;
  out.reserve(opt.docs);
  const bool forms = opt.kind == SynthOptions::Kind::kForms;
  for (int i = 0; i < opt.docs; ++i) {
    Rng rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(i) +
            (forms ? 0 : 0x51ED2701ULL));
    char id[32];
    std::snprintf(id, sizeof(id), "%s-%05d", forms ? "form" : "invoice", i);
    out.push_back(forms ? MakeForm(rng, opt, id) : MakeInvoice(rng, opt, id));
  }
  return out;
}

}  // namespace docgraph
