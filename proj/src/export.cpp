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

#include "tsr/export.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "tsr/errors.h"

namespace tsr {
namespace {

bool spans(const CellExtent& e) { return e.row_span > 1 || e.col_span > 1; }

}  // namespace

void ExportConfig::validate() const {
  if (!(balance >= 0 && balance <= 1)) throw ValidationError("balance must lie in [0, 1]");
  if (nearest_k < 0) throw ValidationError("nearest_k must be >= 0");
  if (hard_gap_factor < 0) throw ValidationError("hard_gap_factor must be >= 0");
  if (canvas < 1) throw ValidationError("canvas must be positive");
  pairs.validate();
}

double box_gap(const Rect& a, const Rect& b) {
  const double dx = std::max({0.0, b.x_min - a.x_max, a.x_min - b.x_max});
  const double dy = std::max({0.0, b.y_min - a.y_max, a.y_min - b.y_max});
  return std::hypot(dx, dy);
}

std::vector<PairSample> candidate_samples(const GroundTruthTable& table, const ExportConfig& config) {
  std::vector<WordBox> words;
  for (const WordBox& w : table.word_boxes) {
    if (table.word_cells.count(w.id)) words.push_back(w);
  }
  std::vector<WordPair> pairs = generate_pairs(words, config.pairs);
  std::set<std::pair<WordId, WordId>> seen;
  for (const WordPair& p : pairs) seen.insert(std::minmax(p.a, p.b));
  for (const WordBox& w : words) {
    std::vector<std::pair<double, WordId>> near;
    for (const WordBox& o : words) {
      if (o.id != w.id) near.emplace_back(box_gap(w.box, o.box), o.id);
    }
    const auto k = std::min(near.size(), static_cast<std::size_t>(config.nearest_k));
    std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
    for (std::size_t i = 0; i < k; ++i) {
      if (seen.insert(std::minmax(w.id, near[i].second)).second) {
        pairs.push_back({w.id, near[i].second, PairDirection::kLeft});
      }
    }
  }

  const OracleClassifier oracle(table);
  const auto extents = table.grid.extents();
  std::map<WordId, Rect> boxes;
  for (const WordBox& w : words) boxes.emplace(w.id, w.box);
  const double cutoff = config.hard_gap_factor * median_word_height(words);
  std::vector<PairSample> out;
  out.reserve(pairs.size());
  for (const WordPair& p : pairs) {
    PairSample s{table.table_id, p.a, p.b, oracle.classify(p.a, p.b), false};
    const double gap = box_gap(boxes.at(p.a), boxes.at(p.b));
    switch (s.label) {
      case RelationLabel::kSameRow:
      case RelationLabel::kSameColumn:
        s.hard = spans(extents.at(table.word_cells.at(p.a))) || spans(extents.at(table.word_cells.at(p.b)));
        break;
      case RelationLabel::kSameCell:
        s.hard = gap >= cutoff;
        break;
      case RelationLabel::kNoRelation:
        s.hard = gap <= cutoff;
        break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PairSample> balance_samples(std::span<const PairSample> samples, double balance, std::mt19937_64& rng) {
  std::vector<std::size_t> hard, simple;
  for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].hard ? hard : simple).push_back(i);
  std::size_t n_hard = hard.size(), n_simple = simple.size();
  if (balance >= 1) {
    n_simple = 0;
  } else if (balance <= 0) {
    n_hard = 0;
  } else {
    const double total = std::min(static_cast<double>(hard.size()) / balance,
                                  static_cast<double>(simple.size()) / (1 - balance));
    n_hard = std::min(hard.size(), static_cast<std::size_t>(std::llround(total * balance)));
    n_simple = std::min(simple.size(), static_cast<std::size_t>(std::llround(total * (1 - balance))));
  }
  std::shuffle(hard.begin(), hard.end(), rng);
  std::shuffle(simple.begin(), simple.end(), rng);
  std::vector<std::size_t> keep(hard.begin(), hard.begin() + static_cast<std::ptrdiff_t>(n_hard));
  keep.insert(keep.end(), simple.begin(), simple.begin() + static_cast<std::ptrdiff_t>(n_simple));
  std::sort(keep.begin(), keep.end());
  std::vector<PairSample> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(samples[i]);
  return out;
}

ExportSummary export_training_pairs(std::span<const GroundTruthTable> tables, const ImageLookup& images,
                                    const std::filesystem::path& out_dir, const ExportConfig& config) {
  config.validate();
  ExportSummary summary;
  std::filesystem::create_directories(out_dir / "images");
  if (tables.empty()) summary.warnings.push_back("no tables in the annotation input");

  std::vector<PairSample> all;
  std::map<std::string, std::size_t> table_index;
  std::map<std::string, Image> table_images;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const GroundTruthTable& table = tables[t];
    ++summary.tables;
    if (!table.has_words()) {
      ++summary.skipped_tables;
      summary.warnings.push_back(table.table_id + ": no word boxes, skipped");
      continue;
    }
    std::optional<Image> img = images ? images(table) : std::nullopt;
    if (!img) {
      ++summary.skipped_tables;
      summary.warnings.push_back(table.table_id + ": image missing, skipped");
      continue;
    }
    table_index[table.table_id] = t;
    table_images[table.table_id] = std::move(*img);
    std::vector<PairSample> samples = candidate_samples(table, config);
    all.insert(all.end(), samples.begin(), samples.end());
  }

  std::mt19937_64 rng(config.seed);
  std::ofstream manifest(out_dir / "manifest.jsonl");
  if (!manifest) throw ValidationError("cannot write " + (out_dir / "manifest.jsonl").string());
  for (const PairSample& s : balance_samples(all, config.balance, rng)) {
    const GroundTruthTable& table = tables[table_index.at(s.table_id)];
    const auto find_box = [&](WordId id) {
      return std::find_if(table.word_boxes.begin(), table.word_boxes.end(), [&](const WordBox& w) { return w.id == id; })->box;
    };
    const std::string rel = "images/" + s.table_id + "_" + std::to_string(s.a) + "_" + std::to_string(s.b) + ".png";
    try {
      write_png(render_pair_image(table_images.at(s.table_id), find_box(s.a), find_box(s.b), config.canvas),
                out_dir / rel);
    } catch (const ValidationError& e) {
      summary.warnings.push_back(s.table_id + ": pair " + std::to_string(s.a) + "," + std::to_string(s.b) + ": " + e.what());
      continue;
    }
    nlohmann::json line = {{"image", rel}, {"label", std::string(to_wire(s.label))}, {"table_id", s.table_id},
                           {"a", s.a}, {"b", s.b}, {"hard", s.hard}};
    manifest << line.dump() << '\n';
    ++summary.records;
    ++(s.hard ? summary.hard : summary.simple);
    ++summary.labels[std::string(to_wire(s.label))];
  }
  std::ofstream(out_dir / "summary.json") << summary_to_json(summary) << '\n';
  return summary;
}

std::string summary_to_json(const ExportSummary& summary, int indent) {
  nlohmann::json labels = nlohmann::json::object();
  for (RelationLabel l : kAllLabels) {
    auto it = summary.labels.find(std::string(to_wire(l)));
    labels[std::string(to_wire(l))] = it == summary.labels.end() ? 0 : it->second;
  }
  nlohmann::json j = {{"tables", summary.tables}, {"skipped_tables", summary.skipped_tables},
                      {"records", summary.records}, {"hard", summary.hard}, {"simple", summary.simple},
                      {"labels", labels}, {"warnings", summary.warnings}};
  return j.dump(indent);
}

}  // namespace tsr
