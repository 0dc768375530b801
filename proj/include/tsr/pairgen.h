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

#include <span>
#include <vector>

#include "tsr/types.h"

namespace tsr {

enum class PairDirection { kLeft, kTop };

// Ordered candidate pair: `b` is a left or top neighbour of anchor `a`.
struct WordPair {
  WordId a = 0;
  WordId b = 0;
  PairDirection direction = PairDirection::kLeft;

  friend bool operator==(const WordPair&, const WordPair&) = default;
};

struct PairGenConfig {
  int m = 3;  // top-neighbour budget per word
  int n = 3;  // left-neighbour budget per word
  // Minimum extent overlap, as a fraction of the smaller box, for two words
  // to share a band.
  double band_overlap = 0.25;
  // A candidate may reach past the anchor's leading edge by this fraction of
  // the anchor's size.
  double edge_slack = 0.2;
  // Banded spatial index; false selects the quadratic reference scan.
  bool use_index = true;

  void validate() const;
};

// Up to n words in the anchor's horizontal band lying to its left, nearest
// (by anchor.x_min - candidate.x_max) first, ties by lower id.
std::vector<WordBox> left_neighbors(const WordBox& anchor, std::span<const WordBox> words, int n,
                                    const PairGenConfig& config = {});

// Mirror of left_neighbors along the vertical axis.
std::vector<WordBox> top_neighbors(const WordBox& anchor, std::span<const WordBox> words, int m,
                                   const PairGenConfig& config = {});

// For every word, pairs with its left neighbours then its top neighbours.
// At most (m + n) pairs per word; order is anchor input order, then
// direction, then neighbour rank.
std::vector<WordPair> generate_pairs(std::span<const WordBox> words, const PairGenConfig& config);

}  // namespace tsr
