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

#include <string>
#include <utility>
#include <vector>

#include "support.h"
#include "tsr/eval.h"

namespace tsr::test {

// Hand-built table with its adjacency set worked out by hand. Cell ids run
// 0..k-1 in row-major order, so they double as content ids.
struct Fixture {
  std::string name;
  CellGrid grid;
  int words_per_cell = 1;
  std::vector<std::pair<int, int>> horizontal;
  std::vector<std::pair<int, int>> vertical;

  RelationSet relations() const {
    RelationSet out;
    for (auto [u, v] : horizontal) out.insert({u, v, LinkDirection::kHorizontal});
    for (auto [u, v] : vertical) out.insert({u, v, LinkDirection::kVertical});
    return out;
  }
};

inline std::vector<Fixture> hand_fixtures() {
  return {
      {"plain 2x2", grid_of({{0, 1}, {2, 3}}), 1, {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}},
      {"nested header, two levels",
       grid_of({{0, 0, 0, 0}, {1, 1, 2, 2}, {3, 4, 5, 6}, {7, 8, 9, 10}}),
       1,
       {{1, 2}, {3, 4}, {4, 5}, {5, 6}, {7, 8}, {8, 9}, {9, 10}},
       {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 7}, {4, 8}, {5, 9}, {6, 10}}},
      {"stub header with rowspan and colspan",
       grid_of({{0, 1, 1}, {0, 2, 3}, {4, 5, 6}, {7, 8, 9}}),
       1,
       {{0, 1}, {0, 2}, {2, 3}, {4, 5}, {5, 6}, {7, 8}, {8, 9}},
       {{0, 4}, {4, 7}, {1, 2}, {1, 3}, {2, 5}, {3, 6}, {5, 8}, {6, 9}}},
      {"rowspan stub column",
       grid_of({{0, 1}, {0, 2}, {3, 4}, {3, 5}}),
       1,
       {{0, 1}, {0, 2}, {3, 4}, {3, 5}},
       {{0, 3}, {1, 2}, {2, 4}, {4, 5}}},
      {"rowspan in the middle column",
       grid_of({{0, 1, 2}, {3, 1, 4}, {5, 6, 7}}),
       1,
       {{0, 1}, {1, 2}, {3, 1}, {1, 4}, {5, 6}, {6, 7}},
       {{0, 3}, {3, 5}, {1, 6}, {2, 4}, {4, 7}}},
      {"rowspan of three",
       grid_of({{0, 1}, {0, 2}, {0, 3}, {4, 5}}),
       1,
       {{0, 1}, {0, 2}, {0, 3}, {4, 5}},
       {{0, 4}, {1, 2}, {2, 3}, {3, 5}}},
      {"multi-line cells, three lines each",
       grid_of({{0, 1, 2}, {3, 4, 5}}),
       3,
       {{0, 1}, {1, 2}, {3, 4}, {4, 5}},
       {{0, 3}, {1, 4}, {2, 5}}},
      {"multi-line colspan header",
       grid_of({{0, 0}, {1, 2}, {3, 4}}),
       2,
       {{1, 2}, {3, 4}},
       {{0, 1}, {0, 2}, {1, 3}, {2, 4}}},
      {"blank body cell",
       grid_of({{0, 1, 2}, {3, -1, 4}, {5, 6, 7}}),
       1,
       {{0, 1}, {1, 2}, {3, 4}, {5, 6}, {6, 7}},
       {{0, 3}, {3, 5}, {1, 6}, {2, 4}, {4, 7}}},
      {"blank top-left corner",
       grid_of({{-1, 0, 1}, {2, 3, 4}, {5, 6, 7}}),
       1,
       {{0, 1}, {2, 3}, {3, 4}, {5, 6}, {6, 7}},
       {{2, 5}, {0, 3}, {3, 6}, {1, 4}, {4, 7}}},
      {"row with a lone cell",
       grid_of({{0, 1, 2}, {3, -1, -1}, {4, 5, 6}}),
       1,
       {{0, 1}, {1, 2}, {4, 5}, {5, 6}},
       {{0, 3}, {3, 4}, {1, 5}, {2, 6}}},
      {"nested header with rowspan and a blank",
       grid_of({{0, 1, 1, 1}, {0, 2, 3, 4}, {5, 6, -1, 7}, {5, 8, 9, 10}}),
       1,
       {{0, 1}, {0, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7}, {5, 8}, {8, 9}, {9, 10}},
       {{0, 5}, {1, 2}, {1, 3}, {1, 4}, {2, 6}, {6, 8}, {3, 9}, {4, 7}, {7, 10}}},
      {"single row", grid_of({{0, 1, 2, 3}}), 1, {{0, 1}, {1, 2}, {2, 3}}, {}},
      {"single column of two-line cells", grid_of({{0}, {1}, {2}}), 2, {}, {{0, 1}, {1, 2}}},
      {"colspan body cell",
       grid_of({{0, 1, 2}, {3, 3, 4}, {5, 6, 7}}),
       1,
       {{0, 1}, {1, 2}, {3, 4}, {5, 6}, {6, 7}},
       {{0, 3}, {1, 3}, {2, 4}, {3, 5}, {3, 6}, {4, 7}}},
  };
}

}  // namespace tsr::test
