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

#include "tsr/types.h"

namespace tsr {

// Rectangle of slots covered by one cell.
struct CellExtent {
  int row = 0;
  int col = 0;
  int row_span = 1;
  int col_span = 1;

  int row_end() const { return row + row_span; }
  int col_end() const { return col + col_span; }
  friend bool operator==(const CellExtent&, const CellExtent&) = default;
};

// m x n matrix of cell ids. A spanning cell repeats its id over every slot it
// covers; kBlank marks an unoccupied slot.
class CellGrid {
 public:
  CellGrid() = default;
  CellGrid(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  CellId at(int row, int col) const { return slots_[index(row, col)]; }
  void set(int row, int col, CellId id) { slots_[index(row, col)] = id; }
  bool is_blank(int row, int col) const { return at(row, col) == kBlank; }
  std::span<const CellId> slots() const { return slots_; }

  // Claims the rectangle for `id`; throws StructureError if any slot is taken
  // or the rectangle leaves the grid.
  void place(CellId id, const CellExtent& extent);

  // Distinct non-blank ids in ascending order.
  std::vector<CellId> cell_ids() const;

  // Bounding rectangle of every cell. Throws StructureError when a cell's
  // slots do not form a filled rectangle.
  std::map<CellId, CellExtent> extents() const;

  // m >= 1, n >= 1 and every id covers a contiguous rectangle.
  void validate() const;
  bool is_valid() const;

  // Ids renumbered 0, 1, ... in row-major order of first appearance.
  CellGrid canonical() const;

  // Drops rows and columns that contain only blank slots. Never returns an
  // empty grid for a non-empty input with at least one cell.
  CellGrid without_blank_lines() const;

  std::string debug_string() const;

  friend bool operator==(const CellGrid&, const CellGrid&) = default;

 private:
  std::size_t index(int row, int col) const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<CellId> slots_;
};

// True when the grids are equal up to cell-id renaming.
bool same_structure(const CellGrid& a, const CellGrid& b);

// A grid together with per-cell content, as seen by the evaluation metric.
struct TableStructure {
  CellGrid grid;
  std::map<CellId, std::string> texts;
  std::map<CellId, Rect> boxes;
};

}  // namespace tsr
