// Copyright 2026 The tsr Authors
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

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/cell_grid.h"

namespace tsr {

enum class LinkDirection { kHorizontal, kVertical };

// Nearest-neighbour link between two content ids, stored left-to-right or
// top-to-bottom.
struct AdjacencyRelation {
  int from = 0;
  int to = 0;
  LinkDirection direction = LinkDirection::kHorizontal;

  friend auto operator<=>(const AdjacencyRelation&, const AdjacencyRelation&) = default;
};

using RelationSet = std::set<AdjacencyRelation>;

// Trim, collapse internal whitespace to one space, ASCII case-fold.
std::string normalize_text(std::string_view text);

struct ContentIds {
  std::map<CellId, int> truth;
  std::map<CellId, int> pred;
};

// Truth cells get 0..k-1 in cell-id order. Each predicted cell takes the id
// of a truth cell with equal normalized text, one-to-one, preferring the
// largest box overlap, then the nearest grid position. Leftover predicted
// cells get fresh ids >= k.
ContentIds assign_content_ids(const TableStructure& pred, const TableStructure& truth);

// Blank slots are skipped while searching for the next neighbour. Flip this
// to make them end the search instead.
inline constexpr bool kBlankEndsSearch = false;

// For each occupied row, links every cell to the next distinct non-blank
// cell to its right; likewise downwards per column. Cells missing from
// `ids` use their cell id.
RelationSet grid_to_adjacency(const CellGrid& grid, const std::map<CellId, int>& ids = {});

struct Score {
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  std::size_t n_correct = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::vector<std::string> flags;  // "empty_prediction", "empty_truth"
};

Score score(const RelationSet& pred, const RelationSet& gt);

struct TableEval {
  std::string table_id;
  Score score;
  bool missing = false;  // no prediction for this truth table
  bool corrupt = false;  // prediction could not be parsed
  std::string error;
};

struct EvalReport {
  Score micro;  // headline: relations pooled across tables
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  std::vector<TableEval> tables;
  std::vector<std::string> flags;  // "empty_corpus", "unmatched_prediction:<id>"
};

struct TruthTable {
  std::string table_id;
  TableStructure structure;
};

// A prediction with no structure is corrupt; `error` says why.
struct PredictedTable {
  std::string table_id;
  std::optional<TableStructure> structure;
  std::string error;
};

TableEval evaluate_table(const std::string& table_id, const TableStructure* pred,
                         const TableStructure& truth);

// Aligns by table id. Truth tables without a prediction score as empty
// predictions and are marked missing.
EvalReport evaluate_corpus(std::span<const PredictedTable> preds, std::span<const TruthTable> truths);

std::string report_to_json(const EvalReport& report, int indent = 2);
std::string report_summary(const EvalReport& report);

}  // namespace tsr
