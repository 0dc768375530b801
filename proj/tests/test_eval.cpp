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
#include "json.hpp"
#include "oracles.h"
#include "support.h"
#include "tsr/eval.h"
#include "tsr/ingest.h"

using namespace tsr;
using tsr::test::brute_adjacency;
using tsr::test::grid_of;
using tsr::test::random_valid_grid;
using H = LinkDirection;

namespace {

TableStructure structure_of(CellGrid grid, std::map<CellId, std::string> texts = {}) {
  if (texts.empty()) {
    for (CellId c : grid.cell_ids()) texts[c] = "c" + std::to_string(c);
  }
  return {std::move(grid), std::move(texts), {}};
}

RelationSet first_n(const RelationSet& s, std::size_t n) {
  RelationSet out;
  for (const auto& r : s) {
    if (out.size() == n) break;
    out.insert(r);
  }
  return out;
}

}  // namespace

TEST_CASE("normalize_text") {
  CHECK(normalize_text("  Hello \t  World\n") == "hello world");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("   ") == "");
  CHECK(normalize_text("A-B  c") == "a-b c");
}

TEST_CASE("adjacency examples") {
  const RelationSet two = grid_to_adjacency(grid_of({{0, 1}, {2, 3}}));
  CHECK(two == RelationSet{{0, 1, H::kHorizontal}, {2, 3, H::kHorizontal}, {0, 2, H::kVertical}, {1, 3, H::kVertical}});
  CHECK(grid_to_adjacency(grid_of({{0, -1, 2}})) == RelationSet{{0, 2, H::kHorizontal}});
  CHECK(grid_to_adjacency(grid_of({{0}})).empty());
  CHECK(grid_to_adjacency(grid_of({{0, 0}, {1, 2}})) == RelationSet{{1, 2, H::kHorizontal}, {0, 1, H::kVertical}, {0, 2, H::kVertical}});
  // Spanning cell with two right neighbours links to both; duplicates collapse.
  CHECK(grid_to_adjacency(grid_of({{0, 1}, {0, 2}})) ==
        RelationSet{{0, 1, H::kHorizontal}, {0, 2, H::kHorizontal}, {1, 2, H::kVertical}});
  const RelationSet ids = grid_to_adjacency(grid_of({{5, 7}}), {{5, 0}, {7, 1}});
  CHECK(ids == RelationSet{{0, 1, H::kHorizontal}});
}

TEST_CASE("adjacency matches brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3000; ++trial) {
    const CellGrid g = random_valid_grid(rng, 7, 7, 3, trial % 3 ? 0.2 : 0.0);
    INFO(g.debug_string());
    CHECK(grid_to_adjacency(g) == brute_adjacency(g));
  }
}

TEST_CASE("plain grids have m(n-1) + n(m-1) relations") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= 6; ++n) {
      const CellGrid g = tsr::test::plain_grid(m, n);
      CHECK(brute_adjacency(g).size() == static_cast<std::size_t>(m * (n - 1) + n * (m - 1)));
      CHECK(grid_to_adjacency(g).size() == static_cast<std::size_t>(m * (n - 1) + n * (m - 1)));
    }
  }
}

TEST_CASE("blank lines at the ends change nothing") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    const CellGrid g = random_valid_grid(rng, 6, 6, 2, 0.15);
    const RelationSet base = grid_to_adjacency(g);
    CellGrid wider(g.rows(), g.cols() + 1), taller(g.rows() + 1, g.cols()), both(g.rows() + 1, g.cols() + 1);
    for (CellGrid* x : {&wider, &taller, &both}) {
      for (int r = 0; r < x->rows(); ++r) {
        for (int c = 0; c < x->cols(); ++c) x->set(r, c, kBlank);
      }
    }
    for (int r = 0; r < g.rows(); ++r) {
      for (int c = 0; c < g.cols(); ++c) {
        wider.set(r, c, g.at(r, c));
        taller.set(r, c, g.at(r, c));
        both.set(r + 1, c + 1, g.at(r, c));
      }
    }
    CHECK(grid_to_adjacency(wider) == base);
    CHECK(grid_to_adjacency(taller) == base);
    CHECK(grid_to_adjacency(both) == base);
  }
}

TEST_CASE("score examples") {
  RelationSet ten;
  for (int i = 0; i < 10; ++i) ten.insert({i, i + 1, H::kHorizontal});
  const Score same = score(ten, ten);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);
  CHECK(same.flags.empty());

  const Score minus = score(first_n(ten, 8), ten);
  CHECK(minus.n_correct == 8);
  CHECK(minus.precision == 1.0);
  CHECK(minus.recall == doctest::Approx(0.8));
  CHECK(minus.f1 == doctest::Approx(8.0 / 9.0));

  const Score empty = score({}, ten);
  CHECK(empty.precision == 0);
  CHECK(empty.recall == 0);
  CHECK(empty.f1 == 0);
  CHECK(empty.flags == std::vector<std::string>{"empty_prediction"});
  CHECK(score(ten, {}).flags == std::vector<std::string>{"empty_truth"});
}

TEST_CASE("score identity and monotonicity") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> id(0, 9), dir(0, 1);
  for (int trial = 0; trial < 400; ++trial) {
    RelationSet gt, pred;
    for (int k = 0; k < 15; ++k) gt.insert({id(rng), id(rng), dir(rng) ? H::kVertical : H::kHorizontal});
    for (int k = 0; k < 15; ++k) pred.insert({id(rng), id(rng), dir(rng) ? H::kVertical : H::kHorizontal});
    CHECK(score(gt, gt).f1 == 1.0);
    const Score s = score(pred, gt);
    CHECK(s.n_correct <= std::min(s.n_gt, s.n_pred));
    if (s.precision + s.recall > 0) CHECK(s.f1 == doctest::Approx(2 * s.precision * s.recall / (s.precision + s.recall)));
    for (const auto& r : pred) {
      RelationSet fewer = pred;
      fewer.erase(r);
      CHECK(score(fewer, gt).recall <= s.recall);
    }
    AdjacencyRelation extra{100 + trial, 200, H::kHorizontal};
    RelationSet more = pred;
    more.insert(extra);
    CHECK(score(more, gt).precision <= s.precision);
  }
}

TEST_CASE("content ids") {
  const TableStructure t = structure_of(grid_of({{0, 1}, {2, 3}}), {{0, "A"}, {1, "b"}, {2, "C"}, {3, "d"}});
  const ContentIds same = assign_content_ids(t, t);
  CHECK(same.truth == std::map<CellId, int>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  CHECK(same.pred == same.truth);

  // Case and whitespace are ignored; unknown text gets a fresh id.
  const TableStructure p = structure_of(grid_of({{7, 8}, {9, 6}}), {{7, " a "}, {8, "B"}, {9, "zzz"}, {6, "D"}});
  const ContentIds ids = assign_content_ids(p, t);
  CHECK(ids.pred.at(7) == 0);
  CHECK(ids.pred.at(8) == 1);
  CHECK(ids.pred.at(9) >= 4);
  CHECK(ids.pred.at(6) == 3);
}

TEST_CASE("duplicate text is disambiguated by box overlap") {
  TableStructure truth = structure_of(grid_of({{0, 1}}), {{0, "n/a"}, {1, "n/a"}});
  truth.boxes = {{0, {0, 0, 50, 10}}, {1, {100, 0, 150, 10}}};
  // Prediction lists the right-hand cell first and puts it in column 0.
  TableStructure pred = structure_of(grid_of({{0, 1}}), {{0, "n/a"}, {1, "n/a"}});
  pred.boxes = {{0, {102, 0, 148, 10}}, {1, {2, 0, 48, 10}}};
  const ContentIds ids = assign_content_ids(pred, truth);
  CHECK(ids.pred.at(0) == ids.truth.at(1));
  CHECK(ids.pred.at(1) == ids.truth.at(0));
  // Swapped cells produce the reversed link, which does not count.
  CHECK(evaluate_table("dup", &pred, truth).score.n_correct == 0);

  // Without boxes the nearer grid position wins.
  pred.boxes.clear();
  const ContentIds by_pos = assign_content_ids(pred, truth);
  CHECK(by_pos.pred.at(0) == by_pos.truth.at(0));
  CHECK(by_pos.pred.at(1) == by_pos.truth.at(1));
}

TEST_CASE("pubtabnet sample adjacency by hand") {
  const auto tables = load_pubtabnet_file(TSR_TEST_DATA "/pubtabnet_sample.jsonl");
  REQUIRE(!tables.empty());
  const GroundTruthTable& t = tables[0];
  REQUIRE(t.table_id == "PMC5755158_010_01");
  const RelationSet expected = {
      {0, 1, H::kHorizontal}, {0, 2, H::kHorizontal}, {2, 3, H::kHorizontal}, {4, 5, H::kHorizontal},
      {5, 6, H::kHorizontal}, {7, 9, H::kHorizontal}, {0, 4, H::kVertical},   {4, 7, H::kVertical},
      {1, 2, H::kVertical},   {2, 5, H::kVertical},   {1, 3, H::kVertical},   {3, 6, H::kVertical},
      {6, 9, H::kVertical}};
  CHECK(grid_to_adjacency(t.grid) == expected);
  const TableStructure s = t.structure();
  const TableEval self = evaluate_table(t.table_id, &s, s);
  CHECK(self.score.n_gt == 13);
  CHECK(self.score.f1 == 1.0);
}

TEST_CASE("corpus aggregation") {
  const TableStructure a = structure_of(grid_of({{0, 1}, {2, 3}}));
  const TableStructure b = structure_of(grid_of({{0, 1}, {2, 3}}), {{0, "p"}, {1, "q"}, {2, "r"}, {3, "s"}});
  const TableStructure b_wrong = structure_of(grid_of({{0, 1}, {2, 3}}), {{0, "w"}, {1, "x"}, {2, "y"}, {3, "z"}});

  SUBCASE("one table equals its score") {
    const std::vector<PredictedTable> preds = {{"a", a, ""}};
    const std::vector<TruthTable> truths = {{"a", a}};
    const EvalReport r = evaluate_corpus(preds, truths);
    CHECK(r.micro.f1 == 1.0);
    CHECK(r.macro_f1 == 1.0);
    CHECK(r.tables.size() == 1);
  }
  SUBCASE("perfect plus disjoint gives micro 0.5") {
    const std::vector<PredictedTable> preds = {{"a", a, ""}, {"b", b_wrong, ""}};
    const std::vector<TruthTable> truths = {{"a", a}, {"b", b}};
    const EvalReport r = evaluate_corpus(preds, truths);
    CHECK(r.micro.precision == 0.5);
    CHECK(r.micro.recall == 0.5);
    CHECK(r.macro_precision == 0.5);
    CHECK(r.micro.n_gt == 8);
  }
  SUBCASE("missing, corrupt and unmatched") {
    const std::vector<PredictedTable> preds = {{"b", std::nullopt, "bad html"}, {"zz", a, ""}};
    const std::vector<TruthTable> truths = {{"a", a}, {"b", b}};
    const EvalReport r = evaluate_corpus(preds, truths);
    REQUIRE(r.tables.size() == 2);
    CHECK(r.tables[0].missing);
    CHECK(r.tables[0].score.n_gt == 4);
    CHECK(r.tables[0].score.n_pred == 0);
    CHECK(r.tables[1].corrupt);
    CHECK(r.tables[1].error == "bad html");
    CHECK(r.flags == std::vector<std::string>{"unmatched_prediction:zz"});
    CHECK(r.micro.f1 == 0);

    const auto j = nlohmann::json::parse(report_to_json(r));
    for (const char* key : {"precision", "recall", "f1", "n_gt", "n_pred", "n_correct", "tables"}) CHECK(j.contains(key));
    CHECK(j["tables"][0]["missing"] == true);
    CHECK(j["tables"][1]["error"] == "bad html");
    CHECK(report_summary(r).find("micro (headline)") != std::string::npos);
  }
  SUBCASE("empty corpus") {
    const EvalReport r = evaluate_corpus({}, {});
    CHECK(r.micro.n_gt == 0);
    CHECK(r.micro.f1 == 0);
    CHECK(r.flags == std::vector<std::string>{"empty_corpus"});
  }
}
