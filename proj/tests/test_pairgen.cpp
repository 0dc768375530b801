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

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "support.h"
#include "tsr/errors.h"
#include "tsr/pairgen.h"

using namespace tsr;
using tsr::test::box;

namespace {

std::vector<WordId> ids(const std::vector<WordBox>& words) {
  std::vector<WordId> out;
  for (const WordBox& w : words) out.push_back(w.id);
  return out;
}

bool has_pair(const std::vector<WordPair>& pairs, WordId x, WordId y) {
  return std::any_of(pairs.begin(), pairs.end(),
                     [&](const WordPair& p) { return (p.a == x && p.b == y) || (p.a == y && p.b == x); });
}

}  // namespace

TEST_CASE("left_neighbors on one row") {
  // Gaps to the anchor (id 4, x 200..230): id3 20, id2 50, id1 100, id0 160.
  const std::vector<WordBox> row = {box(0, 0, 0, 40, 10), box(1, 60, 0, 100, 10), box(2, 120, 0, 150, 10),
                                    box(3, 160, 0, 180, 10), box(4, 200, 0, 230, 10)};
  CHECK(ids(left_neighbors(row[4], row, 3)) == std::vector<WordId>{3, 2, 1});
  CHECK(left_neighbors(row[0], row, 3).empty());

  std::vector<WordBox> two_rows = row;
  two_rows.push_back(box(5, 170, 20, 190, 30));  // below, no vertical overlap
  CHECK(ids(left_neighbors(two_rows[4], two_rows, 5)) == std::vector<WordId>{3, 2, 1, 0});
}

TEST_CASE("top_neighbors on one column") {
  const std::vector<WordBox> col = {box(0, 0, 0, 30, 10), box(1, 0, 30, 30, 40), box(2, 5, 45, 25, 55),
                                    box(3, 0, 80, 30, 90)};
  CHECK(ids(top_neighbors(col[3], col, 3)) == std::vector<WordId>{2, 1, 0});
  CHECK(top_neighbors(col[0], col, 3).empty());
  std::vector<WordBox> with_far = col;
  with_far.push_back(box(4, 100, 0, 120, 10));
  CHECK(ids(top_neighbors(with_far[3], with_far, 5)) == std::vector<WordId>{2, 1, 0});
}

TEST_CASE("band and slack thresholds") {
  const WordBox anchor = box(0, 100, 0, 140, 20);
  // 25% of the shorter height is the band limit: 5 px of 20.
  CHECK(left_neighbors(anchor, std::vector<WordBox>{anchor, box(1, 0, 15, 40, 35)}, 3).size() == 1);
  CHECK(left_neighbors(anchor, std::vector<WordBox>{anchor, box(1, 0, 16, 40, 36)}, 3).empty());
  // Right edge may reach 20% of the anchor width (8 px) past its left edge.
  CHECK(left_neighbors(anchor, std::vector<WordBox>{anchor, box(1, 60, 0, 108, 20)}, 3).size() == 1);
  CHECK(left_neighbors(anchor, std::vector<WordBox>{anchor, box(1, 60, 0, 109, 20)}, 3).empty());
}

TEST_CASE("equal gaps break by lower id") {
  const std::vector<WordBox> words = {box(0, 200, 0, 230, 10), box(5, 150, 0, 180, 10), box(2, 150, 2, 180, 8)};
  CHECK(ids(left_neighbors(words[0], words, 3)) == std::vector<WordId>{2, 5});
}

TEST_CASE("generate_pairs on a 3x3 grid") {
  std::vector<WordBox> words;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) words.push_back(box(r * 3 + c, c * 50.0, r * 30.0, c * 50.0 + 30, r * 30.0 + 12));
  }
  const auto pairs = generate_pairs(words, PairGenConfig{});
  CHECK(pairs.size() == 18);
  CHECK(std::count_if(pairs.begin(), pairs.end(), [](const WordPair& p) { return p.direction == PairDirection::kLeft; }) == 9);
  // Anchor order, then left before top, then nearest first.
  CHECK(pairs[0] == WordPair{1, 0, PairDirection::kLeft});
  CHECK(pairs[1] == WordPair{2, 1, PairDirection::kLeft});
  CHECK(pairs[2] == WordPair{2, 0, PairDirection::kLeft});
  CHECK(pairs[3] == WordPair{3, 0, PairDirection::kTop});

  CHECK(generate_pairs(std::vector<WordBox>{box(0, 0, 0, 1, 1)}, PairGenConfig{}).empty());
  CHECK(generate_pairs(std::vector<WordBox>{}, PairGenConfig{}).empty());
}

TEST_CASE("symmetric duplicates are emitted once") {
  // Two words that are each other's left neighbour thanks to the slack.
  const std::vector<WordBox> words = {box(0, 0, 0, 50, 10), box(1, 45, 0, 95, 10)};
  PairGenConfig cfg;
  cfg.edge_slack = 1.0;
  const auto pairs = generate_pairs(words, cfg);
  CHECK(std::count_if(pairs.begin(), pairs.end(), [](const WordPair& p) { return p.direction == PairDirection::kLeft; }) == 1);
}

TEST_CASE("config validation") {
  PairGenConfig cfg;
  cfg.m = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.n = -1;
  CHECK_THROWS_AS(generate_pairs(std::vector<WordBox>{}, cfg), ValidationError);
}

TEST_CASE("banded index matches the quadratic scan") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(0, 400), w(3, 90), h(4, 30);
  std::uniform_int_distribution<int> count(0, 80), budget(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<WordBox> words;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double x = pos(rng), y = pos(rng);
      // Snap some words to a lattice to provoke exact ties.
      const bool snap = i % 3 == 0;
      const double x0 = snap ? std::floor(x / 50) * 50 : x, y0 = snap ? std::floor(y / 20) * 20 : y;
      words.push_back(box(i, x0, y0, x0 + (snap ? 30 : w(rng)), y0 + (snap ? 10 : h(rng))));
    }
    std::shuffle(words.begin(), words.end(), rng);
    PairGenConfig indexed;
    indexed.m = budget(rng);
    indexed.n = budget(rng);
    PairGenConfig naive = indexed;
    naive.use_index = false;
    const auto a = generate_pairs(words, indexed);
    const auto b = generate_pairs(words, naive);
    REQUIRE(a == b);
    CHECK(a.size() <= static_cast<std::size_t>((indexed.m + indexed.n) * n));
    std::map<WordId, Rect> boxes;
    for (const WordBox& wb : words) boxes[wb.id] = wb.box;
    std::set<std::tuple<WordId, WordId, PairDirection>> seen;
    for (const WordPair& p : a) {
      CHECK(p.a != p.b);
      if (p.direction == PairDirection::kLeft) CHECK(boxes[p.b].center_x() <= boxes[p.a].center_x());
      if (p.direction == PairDirection::kTop) CHECK(boxes[p.b].center_y() <= boxes[p.a].center_y());
      CHECK(seen.insert({std::min(p.a, p.b), std::max(p.a, p.b), p.direction}).second);
    }
  }
}

TEST_CASE("completeness on aligned span-free grids") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const CellGrid g = tsr::test::random_valid_grid(rng, 8, 8, 1, 0.0);
    const GroundTruthTable t = tsr::test::table_of(g);
    const auto pairs = generate_pairs(t.word_boxes, PairGenConfig{});
    std::map<CellId, WordId> word_of;
    for (const auto& [w, c] : t.word_cells) word_of[c] = w;
    for (int r = 0; r < g.rows(); ++r) {
      for (int c = 0; c < g.cols(); ++c) {
        if (c + 1 < g.cols()) CHECK(has_pair(pairs, word_of[g.at(r, c)], word_of[g.at(r, c + 1)]));
        if (r + 1 < g.rows()) CHECK(has_pair(pairs, word_of[g.at(r, c)], word_of[g.at(r + 1, c)]));
      }
    }
  }
}

TEST_CASE("coverage under nesting") {
  // Every pair of cells sharing a slot edge, with some pair of their words
  // overlapping enough to share a band, is joined by a generated pair.
  // One word per cell: stacked words of a multi-line cell all sit at the
  // same gap from a neighbour and can fill its budget on their own.
  SynthConfig config;
  config.max_words = 1;
  int checked = 0, out_of_band = 0;
  for (const GroundTruthTable& t : generate_corpus(17, 500, config)) {
    const auto pairs = generate_pairs(t.word_boxes, PairGenConfig{});
    std::set<std::pair<CellId, CellId>> joined;
    for (const WordPair& p : pairs) joined.insert(std::minmax(t.word_cells.at(p.a), t.word_cells.at(p.b)));
    auto band_ok = [&](CellId a, CellId b, bool side_by_side) {
      for (const WordBox& wa : t.word_boxes) {
        for (const WordBox& wb : t.word_boxes) {
          if (t.word_cells.at(wa.id) != a || t.word_cells.at(wb.id) != b) continue;
          const double r = side_by_side ? vertical_overlap_ratio(wa.box, wb.box) : horizontal_overlap_ratio(wa.box, wb.box);
          if (r >= 0.25) return true;
        }
      }
      return false;
    };
    const CellGrid& g = t.grid;
    for (int r = 0; r < g.rows(); ++r) {
      for (int c = 0; c < g.cols(); ++c) {
        const CellId here = g.at(r, c);
        if (here == kBlank) continue;
        for (auto [dr, dc] : {std::pair{0, 1}, std::pair{1, 0}}) {
          if (r + dr >= g.rows() || c + dc >= g.cols()) continue;
          const CellId next = g.at(r + dr, c + dc);
          if (next == kBlank || next == here) continue;
          if (!band_ok(here, next, dc == 1)) {
            ++out_of_band;
            continue;
          }
          ++checked;
          INFO(t.table_id << " cells " << here << "," << next);
          CHECK(joined.count(std::minmax(here, next)));
        }
      }
    }
  }
  CHECK(checked > 10000);
  MESSAGE("adjacent cell pairs checked: " << checked << ", outside any band: " << out_of_band);
}

TEST_CASE("known gap: spanning cells meeting on a single line") {
  // Two rowspan-3 cells side by side share only their last/first row; their
  // boxes overlap by 14 px against an 82 px height, below the band limit,
  // so no pair joins them although they are grid neighbours.
  CellGrid g(5, 2);
  g.place(0, {0, 0, 3, 1});
  g.place(1, {0, 1, 2, 1});
  g.place(2, {2, 1, 3, 1});
  g.place(3, {3, 0, 2, 1});
  const GroundTruthTable t = tsr::test::table_of(g);
  const Rect& a = t.word_boxes[0].box;
  const Rect& b = t.word_boxes[2].box;
  CHECK(vertical_overlap_ratio(a, b) == doctest::Approx(14.0 / 82.0));
  CHECK_FALSE(has_pair(generate_pairs(t.word_boxes, PairGenConfig{}), 0, 2));
}
