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

#include "tsr/eval.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace tsr {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

nlohmann::json score_json(const Score& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"n_gt", s.n_gt},
          {"n_pred", s.n_pred}, {"n_correct", s.n_correct}, {"flags", s.flags}};
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

ContentIds assign_content_ids(const TableStructure& pred, const TableStructure& truth) {
  ContentIds ids;
  const auto truth_cells = truth.grid.cell_ids();
  const auto pred_cells = pred.grid.cell_ids();
  for (CellId c : truth_cells) ids.truth.emplace(c, static_cast<int>(ids.truth.size()));

  auto text_of = [](const TableStructure& t, CellId c) {
    auto it = t.texts.find(c);
    return it == t.texts.end() ? std::string() : normalize_text(it->second);
  };
  std::map<std::string, std::vector<CellId>> truth_by_text;
  for (CellId c : truth_cells) truth_by_text[text_of(truth, c)].push_back(c);

  const auto truth_ext = truth.grid.extents();
  const auto pred_ext = pred.grid.extents();
  struct Candidate {
    double overlap;
    int distance;
    CellId pred;
    CellId truth;
  };
  std::vector<Candidate> candidates;
  for (CellId p : pred_cells) {
    auto it = truth_by_text.find(text_of(pred, p));
    if (it == truth_by_text.end()) continue;
    for (CellId t : it->second) {
      double overlap = 0;
      auto bp = pred.boxes.find(p);
      auto bt = truth.boxes.find(t);
      if (bp != pred.boxes.end() && bt != truth.boxes.end()) overlap = intersection_area(bp->second, bt->second);
      const CellExtent& ep = pred_ext.at(p);
      const CellExtent& et = truth_ext.at(t);
      candidates.push_back({overlap, std::abs(ep.row - et.row) + std::abs(ep.col - et.col), p, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(-a.overlap, a.distance, a.pred, a.truth) < std::tuple(-b.overlap, b.distance, b.pred, b.truth);
  });
  std::set<CellId> used;
  for (const Candidate& c : candidates) {
    if (ids.pred.count(c.pred) || used.count(c.truth)) continue;
    ids.pred.emplace(c.pred, ids.truth.at(c.truth));
    used.insert(c.truth);
  }
  int fresh = static_cast<int>(ids.truth.size());
  for (CellId p : pred_cells) {
    if (!ids.pred.count(p)) ids.pred.emplace(p, fresh++);
  }
  return ids;
}

RelationSet grid_to_adjacency(const CellGrid& grid, const std::map<CellId, int>& ids) {
  auto id_of = [&](CellId c) {
    auto it = ids.find(c);
    return it == ids.end() ? c : it->second;
  };
  RelationSet out;
  auto scan = [&](int lines, int length, auto slot, LinkDirection dir) {
    for (int line = 0; line < lines; ++line) {
      CellId prev = kBlank;
      for (int k = 0; k < length; ++k) {
        const CellId cur = slot(line, k);
        if (cur == kBlank) {
          if (kBlankEndsSearch) prev = kBlank;
          continue;
        }
        if (prev != kBlank && prev != cur) out.insert({id_of(prev), id_of(cur), dir});
        prev = cur;
      }
    }
  };
  scan(grid.rows(), grid.cols(), [&](int r, int c) { return grid.at(r, c); }, LinkDirection::kHorizontal);
  scan(grid.cols(), grid.rows(), [&](int c, int r) { return grid.at(r, c); }, LinkDirection::kVertical);
  return out;
}

Score score(const RelationSet& pred, const RelationSet& gt) {
  Score s;
  s.n_pred = pred.size();
  s.n_gt = gt.size();
  for (const AdjacencyRelation& r : pred) s.n_correct += gt.count(r);
  s.precision = ratio(s.n_correct, s.n_pred);
  s.recall = ratio(s.n_correct, s.n_gt);
  s.f1 = harmonic(s.precision, s.recall);
  if (s.n_pred == 0) s.flags.push_back("empty_prediction");
  if (s.n_gt == 0) s.flags.push_back("empty_truth");
  return s;
}

TableEval evaluate_table(const std::string& table_id, const TableStructure* pred, const TableStructure& truth) {
  TableEval te;
  te.table_id = table_id;
  if (pred == nullptr) {
    te.score = score({}, grid_to_adjacency(truth.grid, assign_content_ids(TableStructure{}, truth).truth));
    return te;
  }
  const ContentIds ids = assign_content_ids(*pred, truth);
  te.score = score(grid_to_adjacency(pred->grid, ids.pred), grid_to_adjacency(truth.grid, ids.truth));
  return te;
}

EvalReport evaluate_corpus(std::span<const PredictedTable> preds, std::span<const TruthTable> truths) {
  EvalReport report;
  std::map<std::string, const PredictedTable*> by_id;
  for (const PredictedTable& p : preds) by_id[p.table_id] = &p;
  std::set<std::string> truth_ids;
  for (const TruthTable& t : truths) {
    truth_ids.insert(t.table_id);
    auto it = by_id.find(t.table_id);
    const PredictedTable* p = it == by_id.end() ? nullptr : it->second;
    const TableStructure* structure = p && p->structure ? &*p->structure : nullptr;
    TableEval te = evaluate_table(t.table_id, structure, t.structure);
    te.missing = p == nullptr;
    te.corrupt = p != nullptr && !p->structure;
    if (p) te.error = p->error;
    if (te.missing) te.score.flags.push_back("missing_prediction");
    if (te.corrupt) te.score.flags.push_back("corrupt_prediction");
    report.micro.n_gt += te.score.n_gt;
    report.micro.n_pred += te.score.n_pred;
    report.micro.n_correct += te.score.n_correct;
    report.macro_precision += te.score.precision;
    report.macro_recall += te.score.recall;
    report.macro_f1 += te.score.f1;
    report.tables.push_back(std::move(te));
  }
  for (const auto& [id, p] : by_id) {
    if (!truth_ids.count(id)) report.flags.push_back("unmatched_prediction:" + id);
  }
  Score& m = report.micro;
  m.precision = ratio(m.n_correct, m.n_pred);
  m.recall = ratio(m.n_correct, m.n_gt);
  m.f1 = harmonic(m.precision, m.recall);
  if (m.n_pred == 0) m.flags.push_back("empty_prediction");
  if (m.n_gt == 0) m.flags.push_back("empty_truth");
  if (truths.empty()) {
    report.flags.push_back("empty_corpus");
  } else {
    const auto n = static_cast<double>(truths.size());
    report.macro_precision /= n;
    report.macro_recall /= n;
    report.macro_f1 /= n;
  }
  return report;
}

std::string report_to_json(const EvalReport& report, int indent) {
  nlohmann::json j = score_json(report.micro);
  j["macro"] = {{"precision", report.macro_precision}, {"recall", report.macro_recall}, {"f1", report.macro_f1}};
  j["corpus_flags"] = report.flags;
  j["tables"] = nlohmann::json::array();
  for (const TableEval& t : report.tables) {
    nlohmann::json row = score_json(t.score);
    row["table_id"] = t.table_id;
    row["missing"] = t.missing;
    row["corrupt"] = t.corrupt;
    if (!t.error.empty()) row["error"] = t.error;
    j["tables"].push_back(std::move(row));
  }
  return j.dump(indent);
}

std::string report_summary(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-32s %9s %9s %9s %7s %7s %7s  %s\n", "table", "precision", "recall", "f1",
                "n_gt", "n_pred", "n_corr", "flags");
  out << line;
  auto row = [&](const std::string& name, const Score& s, const std::vector<std::string>& flags) {
    std::string joined;
    for (const auto& f : flags) joined += (joined.empty() ? "" : ",") + f;
    std::snprintf(line, sizeof line, "%-32s %9.4f %9.4f %9.4f %7zu %7zu %7zu  %s\n", name.c_str(), s.precision,
                  s.recall, s.f1, s.n_gt, s.n_pred, s.n_correct, joined.c_str());
    out << line;
  };
  for (const TableEval& t : report.tables) row(t.table_id, t.score, t.score.flags);
  std::vector<std::string> flags = report.micro.flags;
  flags.insert(flags.end(), report.flags.begin(), report.flags.end());
  row("micro (headline)", report.micro, flags);
  std::snprintf(line, sizeof line, "%-32s %9.4f %9.4f %9.4f\n", "macro", report.macro_precision, report.macro_recall,
                report.macro_f1);
  out << line;
  return out.str();
}

}  // namespace tsr
