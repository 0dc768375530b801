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

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tsr/ingest.h"
#include "tsr/pairgen.h"

namespace tsr {

enum class RelationLabel { kSameRow, kSameColumn, kSameCell, kNoRelation };

inline constexpr RelationLabel kAllLabels[] = {RelationLabel::kSameRow, RelationLabel::kSameColumn,
                                               RelationLabel::kSameCell, RelationLabel::kNoRelation};

// Wire tokens: same_row, same_column, same_cell, none.
std::string_view to_wire(RelationLabel label);
std::optional<RelationLabel> label_from_wire(std::string_view token);

struct LabeledPair {
  WordPair pair;
  RelationLabel label = RelationLabel::kNoRelation;
  double confidence = 1.0;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// Reads labels off the ground truth. SameCell when both words share a cell,
// else SameRow if the cells' row ranges intersect, else SameColumn if their
// column ranges intersect, else NoRelation.
class OracleClassifier {
 public:
  explicit OracleClassifier(const GroundTruthTable& truth);

  // Throws LookupError when either word has no cell assignment.
  RelationLabel classify(WordId a, WordId b) const;
  LabeledPair classify(const WordPair& pair) const;
  std::vector<LabeledPair> classify(std::span<const WordPair> pairs) const;

 private:
  std::map<WordId, CellId> word_cells_;
  std::map<CellId, CellExtent> extents_;
};

RelationLabel oracle_classify(const WordPair& pair, const GroundTruthTable& truth);

struct HeuristicConfig {
  double row_overlap = 0.5;     // vertical overlap ratio for SameRow
  double column_overlap = 0.5;  // horizontal overlap ratio for SameColumn
  double cell_alignment = 0.5;  // overlap ratio along the other axis for SameCell
  // SameCell gap limits as multiples of the median word height.
  double vertical_gap_factor = 0.6;
  double horizontal_gap_factor = 0.6;
};

// Geometry-only baseline. Thresholds scale with the median word height of
// the table, computed once at construction. Two words are SameCell when
// they are close and aligned, directly or through a chain of such
// neighbours.
class HeuristicClassifier {
 public:
  HeuristicClassifier(std::span<const WordBox> all_words, HeuristicConfig config = {});

  LabeledPair classify(const WordPair& pair) const;
  std::vector<LabeledPair> classify(std::span<const WordPair> pairs) const;
  double median_height() const { return median_height_; }

 private:
  WordId find(WordId w);
  double close_aligned(const Rect& a, const Rect& b) const;

  std::map<WordId, Rect> boxes_;
  std::map<WordId, WordId> cluster_;
  HeuristicConfig config_;
  double median_height_ = 1.0;
};

LabeledPair heuristic_classify(const WordPair& pair, std::span<const WordBox> all_words,
                               const HeuristicConfig& config = {});

double median_word_height(std::span<const WordBox> words);

}  // namespace tsr
