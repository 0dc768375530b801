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

#include "tsr/cell_grid.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tsr/errors.h"

namespace tsr {

CellGrid::CellGrid(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw StructureError("grid dimensions must be non-negative");
  slots_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), kBlank);
}

std::size_t CellGrid::index(int row, int col) const {
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
         static_cast<std::size_t>(col);
}

void CellGrid::place(CellId id, const CellExtent& e) {
  if (e.row < 0 || e.col < 0 || e.row_span < 1 || e.col_span < 1 || e.row_end() > rows_ ||
      e.col_end() > cols_) {
    throw StructureError("cell " + std::to_string(id) + " extent leaves the grid");
  }
  for (int r = e.row; r < e.row_end(); ++r) {
    for (int c = e.col; c < e.col_end(); ++c) {
      if (at(r, c) != kBlank) {
        throw StructureError("slot (" + std::to_string(r) + "," + std::to_string(c) +
                             ") claimed by cells " + std::to_string(at(r, c)) + " and " +
                             std::to_string(id));
      }
    }
  }
  for (int r = e.row; r < e.row_end(); ++r) {
    for (int c = e.col; c < e.col_end(); ++c) set(r, c, id);
  }
}

std::vector<CellId> CellGrid::cell_ids() const {
  std::set<CellId> ids;
  for (CellId id : slots_) {
    if (id != kBlank) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

std::map<CellId, CellExtent> CellGrid::extents() const {
  struct Bounds {
    int r0, c0, r1, c1;
    int count;
  };
  std::map<CellId, Bounds> bounds;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const CellId id = at(r, c);
      if (id == kBlank) continue;
      auto [it, inserted] = bounds.try_emplace(id, Bounds{r, c, r, c, 0});
      Bounds& b = it->second;
      b.r0 = std::min(b.r0, r);
      b.c0 = std::min(b.c0, c);
      b.r1 = std::max(b.r1, r);
      b.c1 = std::max(b.c1, c);
      ++b.count;
    }
  }
  std::map<CellId, CellExtent> out;
  for (const auto& [id, b] : bounds) {
    const CellExtent e{b.r0, b.c0, b.r1 - b.r0 + 1, b.c1 - b.c0 + 1};
    if (e.row_span * e.col_span != b.count) {
      throw StructureError("cell " + std::to_string(id) + " is not a filled rectangle");
    }
    out.emplace(id, e);
  }
  return out;
}

void CellGrid::validate() const {
  if (rows_ < 1 || cols_ < 1) throw StructureError("grid must have at least one row and column");
  (void)extents();
}

bool CellGrid::is_valid() const {
  try {
    validate();
    return true;
  } catch (const StructureError&) {
    return false;
  }
}

CellGrid CellGrid::canonical() const {
  CellGrid out(rows_, cols_);
  std::unordered_map<CellId, CellId> rename;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const CellId id = slots_[i];
    if (id == kBlank) continue;
    auto [it, inserted] = rename.try_emplace(id, static_cast<CellId>(rename.size()));
    out.slots_[i] = it->second;
  }
  return out;
}

CellGrid CellGrid::without_blank_lines() const {
  std::vector<int> keep_rows, keep_cols;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (!is_blank(r, c)) {
        keep_rows.push_back(r);
        break;
      }
    }
  }
  for (int c = 0; c < cols_; ++c) {
    for (int r = 0; r < rows_; ++r) {
      if (!is_blank(r, c)) {
        keep_cols.push_back(c);
        break;
      }
    }
  }
  if (keep_rows.empty()) return *this;
  CellGrid out(static_cast<int>(keep_rows.size()), static_cast<int>(keep_cols.size()));
  for (std::size_t r = 0; r < keep_rows.size(); ++r) {
    for (std::size_t c = 0; c < keep_cols.size(); ++c) {
      out.set(static_cast<int>(r), static_cast<int>(c), at(keep_rows[r], keep_cols[c]));
    }
  }
  return out;
}

std::string CellGrid::debug_string() const {
  std::ostringstream os;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (c) os << ' ';
      if (is_blank(r, c)) {
        os << '.';
      } else {
        os << at(r, c);
      }
    }
    os << '\n';
  }
  return os.str();
}

bool same_structure(const CellGrid& a, const CellGrid& b) {
  return a.canonical() == b.canonical();
}

}  // namespace tsr
