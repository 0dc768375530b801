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

#include "tsr/relations.h"

#include <algorithm>

#include "tsr/errors.h"

namespace tsr {

std::string_view to_wire(RelationLabel label) {
  switch (label) {
    case RelationLabel::kSameRow: return "same_row";
    case RelationLabel::kSameColumn: return "same_column";
    case RelationLabel::kSameCell: return "same_cell";
    case RelationLabel::kNoRelation: return "none";
  }
  return "none";
}

std::optional<RelationLabel> label_from_wire(std::string_view token) {
  for (RelationLabel l : kAllLabels) {
    if (to_wire(l) == token) return l;
  }
  return std::nullopt;
}

OracleClassifier::OracleClassifier(const GroundTruthTable& truth)
    : word_cells_(truth.word_cells), extents_(truth.grid.extents()) {}

RelationLabel OracleClassifier::classify(WordId a, WordId b) const {
  auto cell_of = [&](WordId w) {
    auto it = word_cells_.find(w);
    if (it == word_cells_.end()) throw LookupError("word " + std::to_string(w) + " has no cell assignment");
    auto e = extents_.find(it->second);
    if (e == extents_.end()) {
      throw LookupError("word " + std::to_string(w) + " assigned to cell " + std::to_string(it->second) +
                        " which is not in the grid");
    }
    return std::make_pair(it->second, e->second);
  };
  const auto [ca, ea] = cell_of(a);
  const auto [cb, eb] = cell_of(b);
  if (ca == cb) return RelationLabel::kSameCell;
  const bool rows = ea.row < eb.row_end() && eb.row < ea.row_end();
  if (rows) return RelationLabel::kSameRow;
  const bool cols = ea.col < eb.col_end() && eb.col < ea.col_end();
  if (cols) return RelationLabel::kSameColumn;
  return RelationLabel::kNoRelation;
}

LabeledPair OracleClassifier::classify(const WordPair& pair) const {
  return {pair, classify(pair.a, pair.b), 1.0};
}

std::vector<LabeledPair> OracleClassifier::classify(std::span<const WordPair> pairs) const {
  std::vector<LabeledPair> out;
  out.reserve(pairs.size());
  for (const WordPair& p : pairs) out.push_back(classify(p));
  return out;
}

RelationLabel oracle_classify(const WordPair& pair, const GroundTruthTable& truth) {
  return OracleClassifier(truth).classify(pair.a, pair.b);
}

double median_word_height(std::span<const WordBox> words) {
  if (words.empty()) return 1.0;
  std::vector<double> h;
  h.reserve(words.size());
  for (const WordBox& w : words) h.push_back(w.box.height());
  std::sort(h.begin(), h.end());
  const std::size_t mid = h.size() / 2;
  const double med = h.size() % 2 ? h[mid] : 0.5 * (h[mid - 1] + h[mid]);
  return med > 0 ? med : 1.0;
}

HeuristicClassifier::HeuristicClassifier(std::span<const WordBox> all_words, HeuristicConfig config)
    : config_(config), median_height_(median_word_height(all_words)) {
  for (const WordBox& w : all_words) {
    boxes_.emplace(w.id, w.box);
    cluster_.emplace(w.id, w.id);
  }
  // Close, aligned neighbours chain into one cell: lines of a multi-line
  // cell are linked through the lines between them.
  PairGenConfig neighbours;
  for (const WordPair& p : generate_pairs(all_words, neighbours)) {
    if (close_aligned(boxes_.at(p.a), boxes_.at(p.b)) > 0) cluster_.at(find(p.a)) = find(p.b);
  }
  for (auto& [w, root] : cluster_) root = find(w);
}

WordId HeuristicClassifier::find(WordId w) {
  while (cluster_.at(w) != w) w = cluster_.at(w) = cluster_.at(cluster_.at(w));
  return w;
}

double HeuristicClassifier::close_aligned(const Rect& a, const Rect& b) const {
  const double ov_y = vertical_overlap_ratio(a, b);
  const double ov_x = horizontal_overlap_ratio(a, b);
  const double gap_x = std::max(0.0, std::max(a.x_min, b.x_min) - std::min(a.x_max, b.x_max));
  const double gap_y = std::max(0.0, std::max(a.y_min, b.y_min) - std::min(a.y_max, b.y_max));
  if (ov_y >= config_.cell_alignment && gap_x <= config_.horizontal_gap_factor * median_height_) return ov_y;
  if (ov_x >= config_.cell_alignment && gap_y <= config_.vertical_gap_factor * median_height_) return ov_x;
  return 0;
}

LabeledPair HeuristicClassifier::classify(const WordPair& pair) const {
  auto box_of = [&](WordId w) -> const Rect& {
    auto it = boxes_.find(w);
    if (it == boxes_.end()) throw LookupError("unknown word " + std::to_string(w));
    return it->second;
  };
  const Rect& a = box_of(pair.a);
  const Rect& b = box_of(pair.b);
  const double ov_y = vertical_overlap_ratio(a, b);
  const double ov_x = horizontal_overlap_ratio(a, b);

  if (const double direct = close_aligned(a, b); direct > 0) return {pair, RelationLabel::kSameCell, direct};
  if (cluster_.at(pair.a) == cluster_.at(pair.b)) {
    return {pair, RelationLabel::kSameCell, std::max(ov_x, ov_y)};
  }
  if (ov_y >= config_.row_overlap) return {pair, RelationLabel::kSameRow, ov_y};
  if (ov_x >= config_.column_overlap) return {pair, RelationLabel::kSameColumn, ov_x};
  return {pair, RelationLabel::kNoRelation, 1.0 - std::max(ov_x, ov_y)};
}

std::vector<LabeledPair> HeuristicClassifier::classify(std::span<const WordPair> pairs) const {
  std::vector<LabeledPair> out;
  out.reserve(pairs.size());
  for (const WordPair& p : pairs) out.push_back(classify(p));
  return out;
}

LabeledPair heuristic_classify(const WordPair& pair, std::span<const WordBox> all_words,
                               const HeuristicConfig& config) {
  return HeuristicClassifier(all_words, config).classify(pair);
}

}  // namespace tsr
