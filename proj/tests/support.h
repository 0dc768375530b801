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

#include <filesystem>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tsr/cell_grid.h"
#include "tsr/ingest.h"
#include "tsr/synth.h"

namespace tsr::test {

// Grid from literal rows; -1 marks a blank slot.
inline CellGrid grid_of(std::initializer_list<std::initializer_list<int>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows.begin()->size()) : 0;
  CellGrid g(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (int id : row) g.set(i, j++, id);
    ++i;
  }
  return g;
}

// Any valid grid: random spans up to max_span, random blanks, ids in
// placement order. Not necessarily tight.
inline CellGrid random_valid_grid(std::mt19937_64& rng, int max_rows, int max_cols, int max_span, double blank_rate) {
  std::uniform_int_distribution<int> rows_dist(1, max_rows), cols_dist(1, max_cols), span(1, max_span);
  std::uniform_real_distribution<double> unit(0, 1);
  const int rows = rows_dist(rng), cols = cols_dist(rng);
  CellGrid g(rows, cols);
  std::vector<bool> taken(static_cast<std::size_t>(rows * cols), false);
  auto at = [&](int r, int c) { return taken[static_cast<std::size_t>(r * cols + c)]; };
  CellId next = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (at(r, c)) continue;
      if (unit(rng) < blank_rate) continue;
      int rs = std::min(span(rng), rows - r), cs = std::min(span(rng), cols - c);
      for (int k = 1; k < cs; ++k) {
        if (at(r, c + k)) {
          cs = k;
          break;
        }
      }
      for (int k = 1; k < rs; ++k) {
        bool free = true;
        for (int j = 0; j < cs; ++j) free = free && !at(r + k, c + j);
        if (!free) {
          rs = k;
          break;
        }
      }
      g.place(next++, {r, c, rs, cs});
      for (int i = r; i < r + rs; ++i) {
        for (int j = c; j < c + cs; ++j) taken[static_cast<std::size_t>(i * cols + j)] = true;
      }
    }
  }
  return g;
}

// Lattice-layout truth for a grid with `words` words in every cell and
// 100 px columns; word texts "w<id>".
inline GroundTruthTable table_of(const CellGrid& grid, int words = 1, std::string id = "t") {
  std::map<CellId, int> per_cell;
  for (CellId c : grid.cell_ids()) per_cell[c] = words;
  GroundTruthTable t = layout_table(grid, per_cell, std::vector<double>(static_cast<std::size_t>(grid.cols()), 100.0),
                                    SynthConfig{}, std::move(id));
  for (WordBox& w : t.word_boxes) {
    w.text = "w" + std::to_string(w.id);
    std::string& text = t.cell_texts[t.word_cells.at(w.id)];
    text += (text.empty() ? "" : " ") + *w.text;
  }
  return t;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline WordBox box(WordId id, double x0, double y0, double x1, double y1) { return {id, {x0, y0, x1, y1}, std::nullopt}; }

}  // namespace tsr::test
