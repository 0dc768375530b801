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

#include "tsr/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tsr/errors.h"

namespace tsr {
namespace {

constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "ta", "vo", "si", "de", "pa"};

std::string word_text(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::string s = kSyllables[pick(rng)];
  s += kSyllables[pick(rng)];
  return s + std::to_string(index);
}

// Rows (axis 0) or columns (axis 1) that some cell starts at / ends after.
bool tight_axis(const std::map<CellId, CellExtent>& extents, int length, bool rows) {
  std::vector<bool> starts(static_cast<std::size_t>(length), false);
  std::vector<bool> ends(static_cast<std::size_t>(length + 1), false);
  for (const auto& [id, e] : extents) {
    const int s = rows ? e.row : e.col;
    const int t = rows ? e.row_end() : e.col_end();
    starts[static_cast<std::size_t>(s)] = true;
    ends[static_cast<std::size_t>(t)] = true;
  }
  for (int i = 0; i < length; ++i) {
    if (!starts[static_cast<std::size_t>(i)]) return false;
    if (i > 0 && !ends[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

}  // namespace

void SynthConfig::validate() const {
  if (min_rows < 1 || max_rows < min_rows) throw ValidationError("synth: bad row range");
  if (min_cols < 1 || max_cols < min_cols) throw ValidationError("synth: bad column range");
  if (max_span < 1) throw ValidationError("synth: max_span must be >= 1");
  if (span_probability < 0 || span_probability > 1) throw ValidationError("synth: span_probability outside [0,1]");
  if (max_blank_fraction < 0 || max_blank_fraction >= 1) throw ValidationError("synth: max_blank_fraction outside [0,1)");
  if (min_words < 1 || max_words < min_words) throw ValidationError("synth: bad word count range");
  if (line_height <= 0 || line_gap < 0 || gutter <= 0 || margin < 0) throw ValidationError("synth: bad layout metrics");
  if (min_col_width <= 0 || max_col_width < min_col_width) throw ValidationError("synth: bad column widths");
}

bool is_tight(const CellGrid& grid) {
  if (grid.empty()) return false;
  const auto extents = grid.extents();
  if (!tight_axis(extents, grid.rows(), true) || !tight_axis(extents, grid.cols(), false)) return false;
  return grid.without_blank_lines().rows() == grid.rows() && grid.without_blank_lines().cols() == grid.cols();
}

CellGrid random_grid(std::mt19937_64& rng, const SynthConfig& config) {
  config.validate();
  std::uniform_int_distribution<int> rows_dist(config.min_rows, config.max_rows);
  std::uniform_int_distribution<int> cols_dist(config.min_cols, config.max_cols);
  std::uniform_int_distribution<int> span_dist(1, config.max_span);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int rows = rows_dist(rng);
    const int cols = cols_dist(rng);
    const double blank_rate = config.max_blank_fraction * unit(rng);
    CellGrid grid(rows, cols);
    std::vector<bool> taken(static_cast<std::size_t>(rows * cols), false);
    auto slot = [&](int r, int c) { return taken[static_cast<std::size_t>(r * cols + c)]; };
    int blanks = 0;
    CellId next = 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (slot(r, c)) continue;
        if (unit(rng) < blank_rate) {
          taken[static_cast<std::size_t>(r * cols + c)] = true;
          ++blanks;
          continue;
        }
        int rs = 1, cs = 1;
        if (config.max_span > 1 && unit(rng) < config.span_probability) {
          rs = span_dist(rng);
          cs = span_dist(rng);
        }
        cs = std::min(cs, cols - c);
        for (int k = 1; k < cs; ++k) {
          if (slot(r, c + k)) {
            cs = k;
            break;
          }
        }
        rs = std::min(rs, rows - r);
        for (int k = 1; k < rs; ++k) {
          bool free = true;
          for (int j = 0; j < cs; ++j) free = free && !slot(r + k, c + j);
          if (!free) {
            rs = k;
            break;
          }
        }
        grid.place(next++, {r, c, rs, cs});
        for (int i = r; i < r + rs; ++i) {
          for (int j = c; j < c + cs; ++j) taken[static_cast<std::size_t>(i * cols + j)] = true;
        }
      }
    }
    if (blanks > config.max_blank_fraction * rows * cols) continue;
    if (!is_tight(grid)) continue;
    return grid;
  }
  throw ValidationError("synth: no tight grid found for this configuration");
}

GroundTruthTable layout_table(const CellGrid& grid, const std::map<CellId, int>& words_per_cell,
                              const std::vector<double>& col_widths, const SynthConfig& config,
                              std::string table_id) {
  if (static_cast<int>(col_widths.size()) != grid.cols()) throw ValidationError("synth: one width per column expected");
  const auto extents = grid.extents();
  auto words_of = [&](CellId id) {
    auto it = words_per_cell.find(id);
    return it == words_per_cell.end() ? 1 : std::max(1, it->second);
  };
  auto lines_height = [&](int lines) { return lines * config.line_height + (lines - 1) * config.line_gap; };

  std::vector<int> lines(static_cast<std::size_t>(grid.rows()), 1);
  for (const auto& [id, e] : extents) {
    if (e.row_span == 1) lines[static_cast<std::size_t>(e.row)] = std::max(lines[static_cast<std::size_t>(e.row)], words_of(id));
  }
  std::vector<double> x(static_cast<std::size_t>(grid.cols()) + 1), y(static_cast<std::size_t>(grid.rows()) + 1);
  x[0] = config.margin;
  for (int c = 0; c < grid.cols(); ++c) {
    x[static_cast<std::size_t>(c) + 1] = x[static_cast<std::size_t>(c)] + col_widths[static_cast<std::size_t>(c)] + config.gutter;
  }
  y[0] = config.margin;
  for (int r = 0; r < grid.rows(); ++r) {
    y[static_cast<std::size_t>(r) + 1] = y[static_cast<std::size_t>(r)] + lines_height(lines[static_cast<std::size_t>(r)]) + config.gutter;
  }

  GroundTruthTable t;
  t.table_id = std::move(table_id);
  t.grid = grid;
  WordId next_word = 0;
  for (const auto& [id, e] : extents) {
    const double left = x[static_cast<std::size_t>(e.col)];
    const double right = x[static_cast<std::size_t>(e.col_end())] - config.gutter;
    const double top = y[static_cast<std::size_t>(e.row)];
    const double bottom = y[static_cast<std::size_t>(e.row_end())] - config.gutter;
    const int k = words_of(id);
    double height = config.line_height;
    if (e.row_span > 1) height = (bottom - top - (k - 1) * config.line_gap) / k;
    Rect cell_box;
    for (int i = 0; i < k; ++i) {
      const double y0 = top + i * (height + config.line_gap);
      WordBox w{next_word++, {left, y0, right, y0 + height}, std::nullopt};
      cell_box = i == 0 ? w.box : union_rect(cell_box, w.box);
      t.word_boxes.push_back(w);
      t.word_cells.emplace(w.id, id);
    }
    t.cell_boxes.emplace(id, cell_box);
  }
  return t;
}

GroundTruthTable generate_table(std::mt19937_64& rng, const SynthConfig& config, std::string table_id) {
  CellGrid grid = random_grid(rng, config);
  std::uniform_int_distribution<int> words_dist(config.min_words, config.max_words);
  std::uniform_real_distribution<double> width_dist(config.min_col_width, config.max_col_width);
  std::map<CellId, int> words;
  for (CellId id : grid.cell_ids()) words.emplace(id, words_dist(rng));
  std::vector<double> widths(static_cast<std::size_t>(grid.cols()));
  for (double& w : widths) w = std::round(width_dist(rng));
  GroundTruthTable t = layout_table(grid, words, widths, config, std::move(table_id));
  // Word ids run cell by cell, so texts can be numbered the same way.
  for (WordBox& w : t.word_boxes) {
    w.text = word_text(rng, w.id);
    std::string& cell_text = t.cell_texts[t.word_cells.at(w.id)];
    if (!cell_text.empty()) cell_text += ' ';
    cell_text += *w.text;
  }
  return t;
}

std::vector<GroundTruthTable> generate_corpus(std::uint64_t seed, int count, const SynthConfig& config) {
  std::mt19937_64 rng(seed);
  std::vector<GroundTruthTable> out;
  out.reserve(static_cast<std::size_t>(std::max(0, count)));
  char id[32];
  for (int i = 0; i < count; ++i) {
    std::snprintf(id, sizeof id, "synth_%05d", i);
    out.push_back(generate_table(rng, config, id));
  }
  return out;
}

Image render_table_image(const GroundTruthTable& table, double margin) {
  double w = 0, h = 0;
  for (const WordBox& word : table.word_boxes) {
    w = std::max(w, word.box.x_max);
    h = std::max(h, word.box.y_max);
  }
  for (const auto& [id, box] : table.cell_boxes) {
    w = std::max(w, box.x_max);
    h = std::max(h, box.y_max);
  }
  Image img(std::max(1, static_cast<int>(std::ceil(w + margin))), std::max(1, static_cast<int>(std::ceil(h + margin))));
  constexpr Rgb kInk{64, 64, 64};
  for (const WordBox& word : table.word_boxes) {
    img.fill(static_cast<int>(std::floor(word.box.x_min)), static_cast<int>(std::floor(word.box.y_min)),
             static_cast<int>(std::ceil(word.box.x_max)), static_cast<int>(std::ceil(word.box.y_max)), kInk);
  }
  return img;
}

}  // namespace tsr
