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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tsr/image.h"
#include "tsr/ingest.h"
#include "tsr/pairgen.h"
#include "tsr/relations.h"

namespace tsr {

struct ExportConfig {
  double balance = 0.5;  // target fraction of hard cases in the output
  int nearest_k = 4;     // extra candidates per word, nearest by box gap
  // Hard-case distance cutoff as a multiple of the table's median word
  // height: SameCell pairs at least this far apart, NoRelation pairs at
  // most this far apart.
  double hard_gap_factor = 1.0;
  std::uint64_t seed = 7;
  int canvas = kPairCanvas;
  PairGenConfig pairs;

  void validate() const;
};

struct PairSample {
  std::string table_id;
  WordId a = 0;
  WordId b = 0;
  RelationLabel label = RelationLabel::kNoRelation;
  bool hard = false;
};

// Empty space between two boxes: Euclidean distance between their closest
// points, 0 when they touch or overlap.
double box_gap(const Rect& a, const Rect& b);

// Generated pairs plus each word's nearest_k nearest words, deduplicated,
// labelled by the oracle and tagged hard or simple. Words without a cell
// are left out.
std::vector<PairSample> candidate_samples(const GroundTruthTable& table, const ExportConfig& config);

// Keeps as many samples as possible while the hard share matches `balance`
// (|hard| - balance * total within one sample). Order of the survivors is
// preserved.
std::vector<PairSample> balance_samples(std::span<const PairSample> samples, double balance, std::mt19937_64& rng);

struct ExportSummary {
  int tables = 0;
  int skipped_tables = 0;
  int records = 0;
  int hard = 0;
  int simple = 0;
  std::map<std::string, int> labels;  // wire token -> count
  std::vector<std::string> warnings;
};

using ImageLookup = std::function<std::optional<Image>(const GroundTruthTable&)>;

// Writes out_dir/images/<table>_<a>_<b>.png, out_dir/manifest.jsonl and
// out_dir/summary.json. Tables without word boxes or without an image are
// skipped with a warning.
ExportSummary export_training_pairs(std::span<const GroundTruthTable> tables, const ImageLookup& images,
                                    const std::filesystem::path& out_dir, const ExportConfig& config = {});

std::string summary_to_json(const ExportSummary& summary, int indent = 2);

}  // namespace tsr
