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

#include <random>

#include "doctest.h"
#include "support.h"
#include "tsr/errors.h"
#include "tsr/pairgen.h"
#include "tsr/relations.h"

using namespace tsr;
using tsr::test::box;
using tsr::test::grid_of;

namespace {

// One word per listed (word, cell) pair; boxes are irrelevant to the oracle.
GroundTruthTable truth_with(CellGrid grid, std::initializer_list<std::pair<WordId, CellId>> words) {
  GroundTruthTable t;
  t.table_id = "fixture";
  t.grid = std::move(grid);
  for (auto [w, c] : words) {
    t.word_boxes.push_back(box(w, 0, 0, 1, 1));
    t.word_cells[w] = c;
  }
  return t;
}

}  // namespace

TEST_CASE("wire tokens") {
  CHECK(to_wire(RelationLabel::kSameRow) == "same_row");
  CHECK(to_wire(RelationLabel::kSameColumn) == "same_column");
  CHECK(to_wire(RelationLabel::kSameCell) == "same_cell");
  CHECK(to_wire(RelationLabel::kNoRelation) == "none");
  for (RelationLabel l : kAllLabels) CHECK(label_from_wire(to_wire(l)) == l);
  CHECK_FALSE(label_from_wire("SameRow").has_value());
  CHECK_FALSE(label_from_wire("").has_value());
}

TEST_CASE("oracle examples") {
  // Multi-line cell: words 0 and 1 both in cell 0.
  const GroundTruthTable multi = truth_with(grid_of({{0, 1}, {2, 3}}), {{0, 0}, {1, 0}, {2, 1}, {3, 3}});
  CHECK(oracle_classify({0, 1}, multi) == RelationLabel::kSameCell);
  CHECK(oracle_classify({0, 2}, multi) == RelationLabel::kSameRow);
  CHECK(oracle_classify({0, 3}, multi) == RelationLabel::kNoRelation);

  // Rowspan-2 cell at rows {0,1} against the cell at row 1.
  const GroundTruthTable spanned = truth_with(grid_of({{0, 1}, {0, 2}}), {{0, 0}, {1, 1}, {2, 2}});
  CHECK(oracle_classify({0, 2}, spanned) == RelationLabel::kSameRow);
  CHECK(oracle_classify({0, 1}, spanned) == RelationLabel::kSameRow);
  CHECK(oracle_classify({1, 2}, spanned) == RelationLabel::kSameColumn);

  // Colspan header over two columns.
  const GroundTruthTable header = truth_with(grid_of({{0, 0}, {1, 2}}), {{0, 0}, {1, 1}, {2, 2}});
  CHECK(oracle_classify({0, 1}, header) == RelationLabel::kSameColumn);
  CHECK(oracle_classify({2, 0}, header) == RelationLabel::kSameColumn);
  CHECK(oracle_classify({1, 2}, header) == RelationLabel::kSameRow);

  const OracleClassifier oracle(multi);
  const LabeledPair lp = oracle.classify(WordPair{2, 3, PairDirection::kTop});
  CHECK(lp.label == RelationLabel::kSameColumn);
  CHECK(lp.confidence == 1.0);
  CHECK(lp.pair == WordPair{2, 3, PairDirection::kTop});
}

TEST_CASE("oracle lookup errors") {
  const GroundTruthTable t = truth_with(grid_of({{0, 1}}), {{0, 0}, {1, 1}, {2, 7}});
  CHECK_THROWS_AS(oracle_classify({0, 5}, t), LookupError);
  CHECK_THROWS_AS(oracle_classify({0, 2}, t), LookupError);
}

TEST_CASE("oracle symmetry and consistency on synthetic tables") {
  for (const GroundTruthTable& t : generate_corpus(3, 150)) {
    const OracleClassifier oracle(t);
    const auto extents = t.grid.extents();
    const auto pairs = generate_pairs(t.word_boxes, PairGenConfig{});
    for (const WordPair& p : pairs) {
      const RelationLabel ab = oracle.classify(p.a, p.b);
      CHECK(ab == oracle.classify(p.b, p.a));
      CHECK(oracle.classify(p).confidence == 1.0);
      const CellExtent& ea = extents.at(t.word_cells.at(p.a));
      const CellExtent& eb = extents.at(t.word_cells.at(p.b));
      const bool rows = ea.row < eb.row_end() && eb.row < ea.row_end();
      const bool cols = ea.col < eb.col_end() && eb.col < ea.col_end();
      // Shared rows and shared columns only happen inside one cell.
      if (rows && cols) CHECK(ab == RelationLabel::kSameCell);
      if (ab == RelationLabel::kSameCell) CHECK((rows && cols));
    }
  }
}

TEST_CASE("heuristic examples") {
  const std::vector<WordBox> words = {box(0, 0, 0, 30, 10), box(1, 200, 0, 240, 10), box(2, 0, 60, 30, 70),
                                      box(3, 100, 100, 130, 110), box(4, 34, 0, 60, 10), box(5, 0, 14, 30, 24)};
  const HeuristicClassifier h(words);
  CHECK(h.median_height() == 10.0);

  LabeledPair row = h.classify({1, 0, PairDirection::kLeft});
  CHECK(row.label == RelationLabel::kSameRow);
  CHECK(row.confidence == 1.0);

  LabeledPair col = h.classify({2, 0, PairDirection::kTop});
  CHECK(col.label == RelationLabel::kSameColumn);
  CHECK(col.confidence == 1.0);

  LabeledPair none = h.classify({3, 0, PairDirection::kTop});
  CHECK(none.label == RelationLabel::kNoRelation);
  CHECK(none.confidence == 1.0);

  // 4 px apart horizontally and 4 px apart vertically: below 0.6 x 10.
  CHECK(h.classify({4, 0, PairDirection::kLeft}).label == RelationLabel::kSameCell);
  CHECK(h.classify({5, 0, PairDirection::kTop}).label == RelationLabel::kSameCell);

  // Partial overlap: confidence is the achieved ratio.
  const std::vector<WordBox> shifted = {box(0, 0, 0, 30, 10), box(1, 100, 3, 130, 13)};
  LabeledPair partial = heuristic_classify({1, 0, PairDirection::kLeft}, shifted);
  CHECK(partial.label == RelationLabel::kSameRow);
  CHECK(partial.confidence == doctest::Approx(0.7));

  const std::vector<WordBox> weak = {box(0, 0, 0, 30, 10), box(1, 100, 6, 130, 16)};
  LabeledPair below = heuristic_classify({1, 0, PairDirection::kLeft}, weak);
  CHECK(below.label == RelationLabel::kNoRelation);
  CHECK(below.confidence == doctest::Approx(0.6));

  CHECK_THROWS_AS(h.classify({0, 9, PairDirection::kLeft}), LookupError);
}

TEST_CASE("heuristic thresholds are configurable") {
  const std::vector<WordBox> words = {box(0, 0, 0, 30, 10), box(1, 40, 0, 70, 10)};
  CHECK(heuristic_classify({1, 0, PairDirection::kLeft}, words).label == RelationLabel::kSameRow);
  HeuristicConfig wide;
  wide.horizontal_gap_factor = 1.0;
  CHECK(heuristic_classify({1, 0, PairDirection::kLeft}, words, wide).label == RelationLabel::kSameCell);
}

TEST_CASE("heuristic equals oracle on aligned span-free tables") {
  SynthConfig config;
  config.max_span = 1;
  std::size_t pairs_seen = 0;
  for (const GroundTruthTable& t : generate_corpus(5, 300, config)) {
    const OracleClassifier oracle(t);
    const HeuristicClassifier h(t.word_boxes);
    for (const WordPair& p : generate_pairs(t.word_boxes, PairGenConfig{})) {
      INFO(t.table_id << " " << p.a << "," << p.b);
      CHECK(h.classify(p).label == oracle.classify(p.a, p.b));
      ++pairs_seen;
    }
  }
  CHECK(pairs_seen > 10000);
}
