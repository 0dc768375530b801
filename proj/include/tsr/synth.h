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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tsr/cell_grid.h"
#include "tsr/image.h"
#include "tsr/ingest.h"

namespace tsr {

struct SynthConfig {
  int min_rows = 2;
  int max_rows = 8;
  int min_cols = 2;
  int max_cols = 8;
  int max_span = 3;                 // 1 gives span-free tables
  double span_probability = 0.3;    // chance a cell is drawn with spans
  double max_blank_fraction = 0.2;  // per-table blank rate drawn from [0, this]
  int min_words = 1;
  int max_words = 3;

  // Layout, in pixels.
  double line_height = 14;
  double line_gap = 4;
  double gutter = 20;
  double margin = 10;
  double min_col_width = 60;
  double max_col_width = 140;

  void validate() const;
};

// Every row and column has a cell starting in it, every interior row and
// column boundary is the edge of some cell, and no row or column is
// entirely blank.
bool is_tight(const CellGrid& grid);

// Rejection-samples a tight grid whose blank fraction stays within
// max_blank_fraction.
CellGrid random_grid(std::mt19937_64& rng, const SynthConfig& config);

// Lattice layout. Columns get the given widths and uniform gutters; a row
// is as many text lines tall as its tallest single-row cell. Single-row
// cells stack their words as full-width lines from the top of the row;
// multi-row cells divide their whole region among their words.
GroundTruthTable layout_table(const CellGrid& grid, const std::map<CellId, int>& words_per_cell,
                              const std::vector<double>& col_widths, const SynthConfig& config,
                              std::string table_id);

GroundTruthTable generate_table(std::mt19937_64& rng, const SynthConfig& config, std::string table_id);
std::vector<GroundTruthTable> generate_corpus(std::uint64_t seed, int count, const SynthConfig& config = {});

// White page with every word box filled dark grey, sized to the table
// extent plus the margin.
Image render_table_image(const GroundTruthTable& table, double margin = 10);

}  // namespace tsr
