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

#ifndef DOCGRAPH_SYNTH_H_
#define DOCGRAPH_SYNTH_H_

#include <vector>

#include "docgraph/ingest.h"

namespace docgraph {

struct SynthOptions {
  enum class Kind { kForms, kInvoices };
  Kind kind = Kind::kForms;
  int docs = 100;
  uint64_t seed = 0;
  // Forms: question/answer rows per document, inclusive range.
  int min_pairs = 4;
  int max_pairs = 6;
  // Invoices: number of line-item tables per document.
  int tables = 1;
};

// Forms: a header line on top, then rows holding a question ("Label:") and
// its answer to the right, linked question -> answer. Some rows hold two
// "other" strings with the same layout and no link. The question/answer gap
// and the font size vary per document; occasionally the rows split into two
// columns.
//
// Invoices: supplier and invoice-info blocks on top, receiver below, one or
// more line-item grids, a total and a footer. Each grid is also emitted as a
// "table" region equal to the bounding box of its cells.
//
// Document i depends only on (seed, i), so a longer corpus extends a shorter
// one.
std::vector<RawAnnotation> GenerateCorpus(const SynthOptions& options);

}  // namespace docgraph

#endif  // DOCGRAPH_SYNTH_H_
