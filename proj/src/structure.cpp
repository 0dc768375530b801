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

#include "tsr/structure.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

#include "tsr/errors.h"
#include "tsr/html.h"

namespace tsr {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Top-to-bottom lines (centres within half a word height), left-to-right
// inside each line.
std::vector<const WordBox*> reading_order(std::vector<const WordBox*> words) {
  std::sort(words.begin(), words.end(), [](const WordBox* a, const WordBox* b) {
    if (a->box.center_y() != b->box.center_y()) return a->box.center_y() < b->box.center_y();
    return a->id < b->id;
  });
  std::vector<std::vector<const WordBox*>> lines;
  double line_y = 0, line_h = 0;
  for (const WordBox* w : words) {
    if (lines.empty() || w->box.center_y() - line_y > 0.5 * std::min(line_h, w->box.height())) {
      lines.emplace_back();
      line_y = w->box.center_y();
      line_h = w->box.height();
    }
    lines.back().push_back(w);
  }
  std::vector<const WordBox*> out;
  for (auto& line : lines) {
    std::sort(line.begin(), line.end(), [](const WordBox* a, const WordBox* b) {
      if (a->box.x_min != b->box.x_min) return a->box.x_min < b->box.x_min;
      return a->id < b->id;
    });
    out.insert(out.end(), line.begin(), line.end());
  }
  return out;
}

struct ConflictInfo {
  CellId first;
  CellId second;
};

// Fills a grid from extents; reports the first pair of cells sharing a slot.
std::optional<ConflictInfo> fill_grid(const std::map<CellId, CellExtent>& extents, CellGrid& grid) {
  int rows = 1, cols = 1;
  for (const auto& [id, e] : extents) {
    rows = std::max(rows, e.row_end());
    cols = std::max(cols, e.col_end());
  }
  grid = CellGrid(rows, cols);
  for (const auto& [id, e] : extents) {
    for (int r = e.row; r < e.row_end(); ++r) {
      for (int c = e.col; c < e.col_end(); ++c) {
        if (grid.at(r, c) != kBlank) return ConflictInfo{grid.at(r, c), id};
        grid.set(r, c, id);
      }
    }
  }
  return std::nullopt;
}

// x_to >= x_from + weight.
struct Constraint {
  int from;
  int to;
  int weight;
  double confidence;
  bool hard;
};

struct SolveResult {
  std::vector<int> values;
  std::vector<std::size_t> cycle;  // constraint indices; empty when feasible
};

// Least non-negative solution by repeated relaxation (longest paths from a
// virtual source at 0). A change in round n_vars proves a positive cycle.
SolveResult solve_constraints(int n_vars, const std::vector<Constraint>& cs,
                              const std::vector<bool>& active) {
  SolveResult res;
  res.values.assign(static_cast<std::size_t>(n_vars), 0);
  std::vector<std::ptrdiff_t> pred(static_cast<std::size_t>(n_vars), -1);
  int last_changed = -1;
  for (int round = 0; round <= n_vars; ++round) {
    last_changed = -1;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (!active[k]) continue;
      const Constraint& c = cs[k];
      const int cand = res.values[static_cast<std::size_t>(c.from)] + c.weight;
      if (cand > res.values[static_cast<std::size_t>(c.to)]) {
        res.values[static_cast<std::size_t>(c.to)] = cand;
        pred[static_cast<std::size_t>(c.to)] = static_cast<std::ptrdiff_t>(k);
        last_changed = c.to;
      }
    }
    if (last_changed < 0) return res;
  }
  int x = last_changed;
  for (int i = 0; i < n_vars; ++i) x = cs[static_cast<std::size_t>(pred[static_cast<std::size_t>(x)])].from;
  const int start = x;
  do {
    const auto k = static_cast<std::size_t>(pred[static_cast<std::size_t>(x)]);
    res.cycle.push_back(k);
    x = cs[k].from;
  } while (x != start);
  return res;
}

enum class HintLevel { kNone = 0, kOrder = 1, kOrderAndOverlap = 2 };

struct AxisGeometry {
  Axis axis;  // kColumn places columns (x), kRow places rows (y)
  double lo(const Rect& r) const { return axis == Axis::kColumn ? r.x_min : r.y_min; }
  double hi(const Rect& r) const { return axis == Axis::kColumn ? r.x_max : r.y_max; }
  // Overlap relative to the shorter extent, capped at `reference` so that
  // two large spanning cells sharing one narrow line still count.
  double overlap_ratio(const Rect& a, const Rect& b, double reference) const {
    const double overlap = std::min(hi(a), hi(b)) - std::max(lo(a), lo(b));
    const double base = std::min({hi(a) - lo(a), hi(b) - lo(b), reference});
    return base > 0 && overlap > 0 ? overlap / base : 0.0;
  }
  // Extent overlap along the other axis.
  double cross_overlap(const Rect& a, const Rect& b) const {
    return axis == Axis::kColumn ? overlap_y(a, b) : overlap_x(a, b);
  }
};

// Variables: start of cell i = 2i, end = 2i + 1.
class AxisSystem {
 public:
  AxisSystem(std::span<const Cell> cells, const std::unordered_map<CellId, int>& index,
             const StructureGraph& order_graph, const StructureGraph& share_graph, Axis axis,
             HintLevel hints, double overlap_hint)
      : n_vars_(static_cast<int>(cells.size()) * 2) {
    auto s = [](int i) { return 2 * i; };
    auto e = [](int i) { return 2 * i + 1; };
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) add({s(i), e(i), 1, 1.0, true});

    std::set<std::pair<int, int>> ordered, shared;
    for (const GraphEdge& edge : order_graph.edges) {
      const int u = index.at(edge.from), v = index.at(edge.to);
      add({e(u), s(v), 0, edge.confidence, false});
      ordered.insert({std::min(u, v), std::max(u, v)});
    }
    for (const GraphEdge& edge : share_graph.edges) {
      const int u = index.at(edge.from), v = index.at(edge.to);
      add({s(v), e(u), 1, edge.confidence, false});
      add({s(u), e(v), 1, edge.confidence, false});
      shared.insert({std::min(u, v), std::max(u, v)});
    }
    if (hints == HintLevel::kNone) return;

    const AxisGeometry g{axis};
    std::vector<double> lengths;
    for (const Cell& c : cells) lengths.push_back(g.hi(c.bbox) - g.lo(c.bbox));
    std::nth_element(lengths.begin(), lengths.begin() + static_cast<std::ptrdiff_t>(lengths.size() / 2), lengths.end());
    const double reference = lengths.empty() ? 0.0 : lengths[lengths.size() / 2];
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
      for (int j = i + 1; j < static_cast<int>(cells.size()); ++j) {
        const Rect& a = cells[static_cast<std::size_t>(i)].bbox;
        const Rect& b = cells[static_cast<std::size_t>(j)].bbox;
        const std::pair<int, int> key{i, j};
        if (!shared.count(key)) {
          if (g.hi(a) <= g.lo(b)) {
            add({e(i), s(j), 0, 0.0, false});
            continue;
          }
          if (g.hi(b) <= g.lo(a)) {
            add({e(j), s(i), 0, 0.0, false});
            continue;
          }
        }
        if (hints == HintLevel::kOrderAndOverlap && !ordered.count(key) && !shared.count(key) &&
            g.cross_overlap(a, b) <= 0 && g.overlap_ratio(a, b, reference) >= overlap_hint) {
          add({s(j), e(i), 1, 0.0, false});
          add({s(i), e(j), 1, 0.0, false});
        }
      }
    }
  }

  void add(Constraint c) {
    constraints_.push_back(c);
    active_.push_back(true);
  }

  // Returns false and leaves `cycle` set when infeasible.
  bool solve(std::vector<int>& values, std::vector<std::size_t>& cycle) const {
    SolveResult r = solve_constraints(n_vars_, constraints_, active_);
    values = std::move(r.values);
    cycle = std::move(r.cycle);
    return cycle.empty();
  }

  // Deactivates the weakest soft constraint on the cycle.
  bool drop_weakest(const std::vector<std::size_t>& cycle) {
    std::optional<std::size_t> weakest;
    for (std::size_t k : cycle) {
      if (constraints_[k].hard) continue;
      if (!weakest || constraints_[k].confidence < constraints_[*weakest].confidence) weakest = k;
    }
    if (!weakest) return false;
    active_[*weakest] = false;
    return true;
  }

  std::size_t size() const { return constraints_.size(); }

  std::vector<int> cycle_cells(const std::vector<std::size_t>& cycle, std::span<const Cell> cells) const {
    std::set<int> ids;
    for (std::size_t k : cycle) {
      ids.insert(cells[static_cast<std::size_t>(constraints_[k].from / 2)].id);
      ids.insert(cells[static_cast<std::size_t>(constraints_[k].to / 2)].id);
    }
    return {ids.begin(), ids.end()};
  }

 private:
  int n_vars_;
  std::vector<Constraint> constraints_;
  std::vector<bool> active_;
};

GridResult grid_from_extents(std::map<CellId, CellExtent> extents, int repairs) {
  GridResult res;
  CellGrid raw;
  if (auto conflict = fill_grid(extents, raw)) {
    throw PlacementConflict("cells " + std::to_string(conflict->first) + " and " +
                                std::to_string(conflict->second) + " claim the same slot",
                            conflict->first, conflict->second);
  }
  res.grid = raw.without_blank_lines();
  res.extents = res.grid.extents();
  res.repairs = repairs;
  return res;
}

GridResult build_single_path(std::span<const Cell> cells, const StructureGraph& row_graph,
                             const StructureGraph& col_graph, const SpanAssignment& spans) {
  auto span_of = [](const std::map<CellId, int>& m, CellId id) {
    auto it = m.find(id);
    return it == m.end() ? 1 : it->second;
  };
  auto starts = [&](const StructureGraph& g, const std::map<CellId, int>& span) {
    std::map<CellId, int> start;
    for (const Cell& c : cells) start[c.id] = 0;
    std::map<CellId, std::vector<CellId>> preds;
    for (const GraphEdge& e : g.edges) preds[e.to].push_back(e.from);
    for (CellId v : g.topological_order()) {
      for (CellId u : preds[v]) start[v] = std::max(start[v], start[u] + span_of(span, u));
    }
    return start;
  };
  const auto col_start = starts(row_graph, spans.col_span);
  const auto row_start = starts(col_graph, spans.row_span);
  std::map<CellId, CellExtent> extents;
  for (const Cell& c : cells) {
    extents[c.id] = {row_start.at(c.id), col_start.at(c.id), span_of(spans.row_span, c.id),
                     span_of(spans.col_span, c.id)};
  }
  return grid_from_extents(std::move(extents), 0);
}

GridResult build_intervals(std::span<const Cell> cells, const StructureGraph& row_graph,
                           const StructureGraph& col_graph, const GridOptions& options) {
  std::unordered_map<CellId, int> index;
  for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i].id, static_cast<int>(i));

  std::vector<HintLevel> levels;
  if (options.geometric_hints) levels = {HintLevel::kOrderAndOverlap, HintLevel::kOrder};
  levels.push_back(HintLevel::kNone);

  std::optional<StructureConflict> last_cycle;
  std::optional<PlacementConflict> last_placement;
  for (HintLevel level : levels) {
    // Columns are ordered by the row graph and shared through the column
    // graph; rows the other way round.
    AxisSystem cols(cells, index, row_graph, col_graph, Axis::kColumn, level, options.overlap_hint);
    AxisSystem rows(cells, index, col_graph, row_graph, Axis::kRow, level, options.overlap_hint);
    int repairs = 0;
    const std::size_t budget = options.repair ? cols.size() + rows.size() : 0;
    bool give_up = false;
    while (!give_up) {
      std::vector<int> cv, rv;
      std::vector<std::size_t> cycle;
      bool solved = true;
      for (AxisSystem* sys : {&cols, &rows}) {
        std::vector<int>& values = sys == &cols ? cv : rv;
        while (!sys->solve(values, cycle)) {
          if (static_cast<std::size_t>(repairs) >= budget || !sys->drop_weakest(cycle)) {
            last_cycle.emplace("contradictory " + std::string(sys == &cols ? "column" : "row") +
                                   " constraints between cells",
                               sys->cycle_cells(cycle, cells));
            solved = false;
            break;
          }
          ++repairs;
        }
        if (!solved) break;
      }
      if (!solved) break;

      std::map<CellId, CellExtent> extents;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const int rs = rv[2 * i], re = rv[2 * i + 1], cs = cv[2 * i], ce = cv[2 * i + 1];
        extents[cells[i].id] = {rs, cs, re - rs, ce - cs};
      }
      CellGrid raw;
      auto conflict = fill_grid(extents, raw);
      if (!conflict) return grid_from_extents(std::move(extents), repairs);

      last_placement.emplace("cells " + std::to_string(conflict->first) + " and " +
                                 std::to_string(conflict->second) + " claim the same slot",
                             conflict->first, conflict->second);
      if (static_cast<std::size_t>(repairs) >= budget) break;
      // Separate the two cells along the axis where their centres differ most.
      const Rect& a = cells[static_cast<std::size_t>(index.at(conflict->first))].bbox;
      const Rect& b = cells[static_cast<std::size_t>(index.at(conflict->second))].bbox;
      const double dx = std::abs(a.center_x() - b.center_x()) / std::max(1e-9, 0.5 * (a.width() + b.width()));
      const double dy = std::abs(a.center_y() - b.center_y()) / std::max(1e-9, 0.5 * (a.height() + b.height()));
      if (dx == 0 && dy == 0) break;
      int first = index.at(conflict->first), second = index.at(conflict->second);
      const bool by_col = dx >= dy;
      const bool swap = by_col ? a.center_x() > b.center_x() : a.center_y() > b.center_y();
      if (swap) std::swap(first, second);
      (by_col ? cols : rows).add({2 * first + 1, 2 * second, 0, 0.5, false});
      ++repairs;
    }
  }
  if (last_placement) throw *last_placement;
  if (last_cycle) throw *last_cycle;
  throw StructureError("grid placement failed");
}

}  // namespace

std::vector<CellId> StructureGraph::children(CellId node) const {
  std::vector<CellId> out;
  for (const GraphEdge& e : edges) {
    if (e.from == node) out.push_back(e.to);
  }
  return out;
}

bool StructureGraph::has_edge(CellId from, CellId to) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const GraphEdge& e) { return e.from == from && e.to == to; });
}

std::vector<CellId> StructureGraph::topological_order() const {
  std::map<CellId, int> indeg;
  std::map<CellId, std::vector<CellId>> out_edges;
  for (CellId n : nodes) indeg[n] = 0;
  for (const GraphEdge& e : edges) {
    ++indeg[e.to];
    indeg.try_emplace(e.from, 0);
    out_edges[e.from].push_back(e.to);
  }
  std::set<CellId> ready;
  for (const auto& [n, d] : indeg) {
    if (d == 0) ready.insert(n);
  }
  std::vector<CellId> order;
  while (!ready.empty()) {
    const CellId n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (CellId m : out_edges[n]) {
      if (--indeg[m] == 0) ready.insert(m);
    }
  }
  if (order.size() != indeg.size()) {
    std::vector<int> stuck;
    for (const auto& [n, d] : indeg) {
      if (d > 0) stuck.push_back(n);
    }
    throw StructureConflict("structure graph has a cycle", std::move(stuck));
  }
  return order;
}

std::vector<Cell> merge_cells(std::span<const WordBox> words, std::span<const LabeledPair> labeled) {
  std::unordered_map<WordId, std::size_t> pos;
  for (std::size_t i = 0; i < words.size(); ++i) pos.emplace(words[i].id, i);
  auto position = [&](WordId w) {
    auto it = pos.find(w);
    if (it == pos.end()) throw LookupError("label refers to unknown word " + std::to_string(w));
    return it->second;
  };
  DisjointSets sets(words.size());
  for (const LabeledPair& lp : labeled) {
    const std::size_t a = position(lp.pair.a), b = position(lp.pair.b);
    if (lp.label == RelationLabel::kSameCell) sets.unite(a, b);
  }
  std::map<std::size_t, std::size_t> root_to_cell;
  std::vector<std::vector<const WordBox*>> groups;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto [it, inserted] = root_to_cell.try_emplace(sets.find(i), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&words[i]);
  }
  std::vector<Cell> cells;
  cells.reserve(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    Cell cell;
    cell.id = static_cast<CellId>(k);
    cell.bbox = groups[k].front()->box;
    for (const WordBox* w : reading_order(groups[k])) {
      cell.member_words.push_back(w->id);
      cell.bbox = union_rect(cell.bbox, w->box);
      if (w->text && !w->text->empty()) {
        if (!cell.text.empty()) cell.text += ' ';
        cell.text += *w->text;
      }
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

StructureGraph build_axis_graph(std::span<const Cell> cells, std::span<const LabeledPair> labeled,
                                Axis axis, bool drop_ties, int* dropped) {
  StructureGraph g;
  g.axis = axis;
  std::unordered_map<WordId, CellId> cell_of;
  std::unordered_map<CellId, const Cell*> by_id;
  for (const Cell& c : cells) {
    g.nodes.push_back(c.id);
    by_id.emplace(c.id, &c);
    for (WordId w : c.member_words) cell_of.emplace(w, c.id);
  }
  const RelationLabel wanted = axis == Axis::kRow ? RelationLabel::kSameRow : RelationLabel::kSameColumn;
  std::map<std::pair<CellId, CellId>, double> edges;
  for (const LabeledPair& lp : labeled) {
    if (lp.label != wanted) continue;
    auto ia = cell_of.find(lp.pair.a), ib = cell_of.find(lp.pair.b);
    if (ia == cell_of.end() || ib == cell_of.end()) throw LookupError("label refers to a word outside every cell");
    CellId u = ia->second, v = ib->second;
    if (u == v) continue;
    const Rect& bu = by_id.at(u)->bbox;
    const Rect& bv = by_id.at(v)->bbox;
    const double cu = axis == Axis::kRow ? bu.center_x() : bu.center_y();
    const double cv = axis == Axis::kRow ? bv.center_x() : bv.center_y();
    if (cu == cv) {
      if (drop_ties) {
        if (dropped) ++*dropped;
        continue;
      }
      throw StructureConflict(std::string("cells ") + std::to_string(u) + " and " + std::to_string(v) +
                                  " are labelled " + (axis == Axis::kRow ? "same-row" : "same-column") +
                                  " but share a centre",
                              {u, v});
    }
    if (cu > cv) std::swap(u, v);
    auto [it, inserted] = edges.try_emplace({u, v}, lp.confidence);
    if (!inserted) it->second = std::max(it->second, lp.confidence);
  }
  for (const auto& [key, conf] : edges) g.edges.push_back({key.first, key.second, conf});
  (void)g.topological_order();
  return g;
}

std::map<CellId, int> compute_spans(const StructureGraph& graph) {
  const std::vector<CellId> order = graph.topological_order();
  std::unordered_map<CellId, std::size_t> idx;
  for (std::size_t i = 0; i < order.size(); ++i) idx.emplace(order[i], i);
  const std::size_t n = order.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> reach(n, std::vector<std::uint64_t>(words, 0));
  std::vector<std::vector<std::size_t>> kids(n);
  for (const GraphEdge& e : graph.edges) kids[idx.at(e.from)].push_back(idx.at(e.to));

  auto test = [&](std::size_t from, std::size_t bit) { return (reach[from][bit / 64] >> (bit % 64)) & 1U; };
  std::vector<int> span(n, 1);
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c : kids[k]) {
      reach[k][c / 64] |= std::uint64_t{1} << (c % 64);
      for (std::size_t w = 0; w < words; ++w) reach[k][w] |= reach[c][w];
    }
    if (kids[k].empty()) continue;
    int total = 0;
    for (std::size_t c : kids[k]) {
      const bool via_other = std::any_of(kids[k].begin(), kids[k].end(),
                                         [&](std::size_t o) { return o != c && test(o, c); });
      if (!via_other) total += span[c];
    }
    span[k] = std::max(1, total);
  }
  std::map<CellId, int> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace(order[i], span[i]);
  return out;
}

SpanAssignment compute_span_assignment(const StructureGraph& row_graph, const StructureGraph& col_graph) {
  return {compute_spans(row_graph), compute_spans(col_graph)};
}

GridResult build_grid(std::span<const Cell> cells, const StructureGraph& row_graph,
                      const StructureGraph& col_graph, const SpanAssignment& spans,
                      const GridOptions& options) {
  if (cells.empty()) throw StructureError("no cells to place");
  if (options.method == GridMethod::kSinglePath) return build_single_path(cells, row_graph, col_graph, spans);
  return build_intervals(cells, row_graph, col_graph, options);
}

std::map<CellId, std::string> Reconstruction::texts() const {
  std::map<CellId, std::string> out;
  for (const Cell& c : cells) out.emplace(c.id, c.text);
  return out;
}

std::map<CellId, Rect> Reconstruction::boxes() const {
  std::map<CellId, Rect> out;
  for (const Cell& c : cells) out.emplace(c.id, c.bbox);
  return out;
}

std::string Reconstruction::html() const { return emit_html(grid, texts()); }

Reconstruction reconstruct(std::span<const WordBox> words, std::span<const LabeledPair> labeled,
                           const GridOptions& options) {
  Reconstruction rec;
  rec.cells = merge_cells(words, labeled);
  int dropped = 0;
  rec.row_graph = build_axis_graph(rec.cells, labeled, Axis::kRow, options.repair, &dropped);
  rec.col_graph = build_axis_graph(rec.cells, labeled, Axis::kColumn, options.repair, &dropped);
  rec.spans = compute_span_assignment(rec.row_graph, rec.col_graph);
  GridResult placed = build_grid(rec.cells, rec.row_graph, rec.col_graph, rec.spans, options);
  rec.grid = std::move(placed.grid);
  rec.repairs = placed.repairs + dropped;
  return rec;
}

}  // namespace tsr
