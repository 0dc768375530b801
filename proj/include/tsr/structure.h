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
#include <span>
#include <string>
#include <vector>

#include "tsr/cell_grid.h"
#include "tsr/relations.h"

namespace tsr {

// A group of words joined by SameCell labels.
struct Cell {
  CellId id = 0;
  std::vector<WordId> member_words;  // reading order
  Rect bbox;                         // union of member boxes
  std::string text;                  // member transcripts in reading order
};

enum class Axis { kRow, kColumn };

struct GraphEdge {
  CellId from = 0;
  CellId to = 0;
  double confidence = 1.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Row graph: u -> v when u and v share a row and u lies left of v.
// Column graph: u -> v when they share a column and u lies above v.
struct StructureGraph {
  Axis axis = Axis::kRow;
  std::vector<CellId> nodes;
  std::vector<GraphEdge> edges;

  std::vector<CellId> children(CellId node) const;
  bool has_edge(CellId from, CellId to) const;

  // Kahn order; throws StructureConflict listing the nodes left on a cycle.
  std::vector<CellId> topological_order() const;
};

// Per-cell spans derived from the two graphs.
struct SpanAssignment {
  std::map<CellId, int> row_span;
  std::map<CellId, int> col_span;
};

// Connected components of the SameCell graph; singletons for unpaired
// words. Cell ids follow the input position of each cell's first word.
std::vector<Cell> merge_cells(std::span<const WordBox> words, std::span<const LabeledPair> labeled);

// Orients every SameRow (kRow) or SameColumn (kColumn) pair between two
// different cells by bbox centre and collapses duplicates, keeping the
// highest confidence. Equal centres raise StructureConflict unless
// `drop_ties` is set, in which case the pair is skipped and counted.
StructureGraph build_axis_graph(std::span<const Cell> cells, std::span<const LabeledPair> labeled,
                                Axis axis, bool drop_ties = false, int* dropped = nullptr);

// Bottom-up span sums: a child counts toward its parent only if the direct
// edge is the sole path between them; childless nodes get 1. On the column
// graph this yields column spans, on the row graph row spans.
std::map<CellId, int> compute_spans(const StructureGraph& graph);
SpanAssignment compute_span_assignment(const StructureGraph& row_graph,
                                       const StructureGraph& col_graph);

enum class GridMethod {
  // Integer interval placement solved as difference constraints (default).
  kIntervals,
  // Spans from compute_spans, starts from span-weighted longest paths.
  kSinglePath,
};

struct GridOptions {
  GridMethod method = GridMethod::kIntervals;
  // Use bbox separation/overlap as low-confidence hints where the labels
  // leave a cell's position open.
  bool geometric_hints = true;
  double overlap_hint = 0.25;
  // Drop the lowest-confidence constraint on each inconsistency and retry.
  bool repair = false;
};

struct GridResult {
  CellGrid grid;
  std::map<CellId, CellExtent> extents;
  int repairs = 0;
};

// Places every cell in an m x n grid. Unclaimed slots stay blank; rows and
// columns left entirely blank are dropped. Throws PlacementConflict when two
// cells claim a slot and StructureConflict for contradictory constraints.
GridResult build_grid(std::span<const Cell> cells, const StructureGraph& row_graph,
                      const StructureGraph& col_graph, const SpanAssignment& spans,
                      const GridOptions& options = {});

struct Reconstruction {
  std::vector<Cell> cells;
  StructureGraph row_graph;
  StructureGraph col_graph;
  SpanAssignment spans;
  CellGrid grid;
  int repairs = 0;

  std::map<CellId, std::string> texts() const;
  std::map<CellId, Rect> boxes() const;
  TableStructure structure() const { return {grid, texts(), boxes()}; }
  std::string html() const;
};

// merge_cells -> axis graphs -> spans -> build_grid.
Reconstruction reconstruct(std::span<const WordBox> words, std::span<const LabeledPair> labeled,
                           const GridOptions& options = {});

}  // namespace tsr
