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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsr/geometry.h"
#include "tsr/image.h"
#include "tsr/ingest.h"
#include "tsr/pairgen.h"
#include "tsr/relations.h"
#include "tsr/remote.h"
#include "tsr/structure.h"

namespace tsr {

enum class ClassifierKind { kOracle, kHeuristic, kRemote };
enum class FallbackPolicy { kFail, kHeuristic };

std::string_view to_string(ClassifierKind kind);
ClassifierKind classifier_from_string(std::string_view name);
std::string_view to_string(FallbackPolicy policy);
FallbackPolicy fallback_from_string(std::string_view name);

struct PipelineConfig {
  ClassifierKind classifier = ClassifierKind::kHeuristic;
  std::string remote_endpoint;
  FallbackPolicy fallback = FallbackPolicy::kFail;
  int pair_m = 3;
  int pair_n = 3;
  int patch_size = kDefaultPatchSize;
  double overlap = kDefaultPatchOverlap;
  double frame_size = kDefaultFrameSize;
  bool repair = false;
  std::filesystem::path output_dir = "out";
  int workers = 1;
  std::size_t batch_size = 32;
  int max_in_flight = 4;
  int timeout_seconds = 30;

  // Throws ValidationError; the endpoint is required for the remote
  // classifier.
  void validate() const;
  PairGenConfig pair_config() const;
  RemoteConfig remote_config() const;
  GridOptions grid_options() const;
};

// Overrides `base` with the keys present in a JSON object: classifier,
// endpoint, fallback, pair_m, pair_n, patch_size, overlap, frame_size,
// repair, workers, out, batch_size, max_in_flight, timeout_seconds.
// Unknown keys are rejected.
PipelineConfig apply_config_json(PipelineConfig base, std::string_view json);
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

// Detections JSON-lines where every line may carry "patch": [x0, y0, x1,
// y1]. With patches, boxes are patch-relative; they are merged into image
// coordinates and frame-scan deduplicated.
std::vector<WordBox> load_detections(const std::filesystem::path& path, double frame_size = kDefaultFrameSize);

// Everything one table needs to run through the pipeline.
struct TableInput {
  std::string table_id;
  std::vector<WordBox> words;
  // Ground truth with word_cells defined for `words`; required by the oracle.
  std::optional<GroundTruthTable> oracle_truth;
  // Table image for the remote classifier; rendered from the words if absent.
  std::optional<Image> image;
};

// Words come from `detections` when given, else the truth's own words, else
// one word per truth cell box. With detections and truth, the oracle's
// word-cell map is built by maximal overlap.
TableInput make_table_input(const std::string& table_id, const GroundTruthTable* truth,
                            const std::vector<WordBox>* detections);

struct ClassifyResult {
  std::vector<LabeledPair> labels;
  bool fell_back = false;
  std::string warning;
};

// Throws the classifier's error unless the fallback policy absorbs it.
ClassifyResult classify_pairs(const TableInput& input, std::span<const WordPair> pairs, const PipelineConfig& config);

struct TableOutcome {
  std::string table_id;
  std::vector<WordPair> pairs;
  std::vector<LabeledPair> labels;
  std::optional<Reconstruction> reconstruction;
  bool fell_back = false;
  std::string warning;
  std::string failed_stage;  // empty on success
  std::string error;

  bool ok() const { return failed_stage.empty(); }
};

enum class StopAfter { kPairs, kLabels, kReconstruction };

// pairgen -> classify -> reconstruct for one table. With `given_labels` the
// first two stages are skipped. Errors are captured in the outcome.
TableOutcome run_table(const TableInput& input, const PipelineConfig& config, StopAfter stop = StopAfter::kReconstruction,
                       const std::vector<LabeledPair>* given_labels = nullptr,
                       const std::vector<WordPair>* given_pairs = nullptr);

// Runs fn(i) for i in [0, count) on up to `workers` threads; the first
// exception thrown by fn is rethrown after all workers finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace tsr
