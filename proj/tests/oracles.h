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

#include "tsr/cell_grid.h"
#include "tsr/eval.h"

namespace tsr::test {

// Adjacency by exhaustive slot-pair search: u -> v when some row holds u
// then v with only blanks or u itself between them; likewise per column.
inline RelationSet brute_adjacency(const CellGrid& g) {
  RelationSet out;
  auto scan = [&](int lines, int length, auto slot, LinkDirection dir) {
    for (int line = 0; line < lines; ++line) {
      for (int i = 0; i < length; ++i) {
        for (int j = i + 1; j < length; ++j) {
          const CellId u = slot(line, i), v = slot(line, j);
          if (u == kBlank || v == kBlank || u == v) continue;
          bool clear = true;
          for (int k = i + 1; k < j; ++k) clear = clear && (slot(line, k) == kBlank || slot(line, k) == u);
          if (clear) out.insert({u, v, dir});
        }
      }
    }
  };
  scan(g.rows(), g.cols(), [&](int r, int c) { return g.at(r, c); }, LinkDirection::kHorizontal);
  scan(g.cols(), g.rows(), [&](int c, int r) { return g.at(r, c); }, LinkDirection::kVertical);
  return out;
}

inline CellGrid plain_grid(int m, int n) {
  CellGrid g(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) g.set(r, c, r * n + c);
  }
  return g;
}

}  // namespace tsr::test
