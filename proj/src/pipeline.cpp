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

#include "tsr/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "tsr/errors.h"
#include "tsr/synth.h"

namespace tsr {
namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: bad value for " + key);
  }
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kOracle:
      return "oracle";
    case ClassifierKind::kHeuristic:
      return "heuristic";
    case ClassifierKind::kRemote:
      return "remote";
  }
  return "?";
}

ClassifierKind classifier_from_string(std::string_view name) {
  if (name == "oracle") return ClassifierKind::kOracle;
  if (name == "heuristic") return ClassifierKind::kHeuristic;
  if (name == "remote") return ClassifierKind::kRemote;
  throw ValidationError("unknown classifier \"" + std::string(name) + "\"");
}

std::string_view to_string(FallbackPolicy policy) { return policy == FallbackPolicy::kFail ? "fail" : "heuristic"; }

FallbackPolicy fallback_from_string(std::string_view name) {
  if (name == "fail") return FallbackPolicy::kFail;
  if (name == "heuristic") return FallbackPolicy::kHeuristic;
  throw ValidationError("unknown fallback \"" + std::string(name) + "\"");
}

void PipelineConfig::validate() const {
  if (classifier == ClassifierKind::kRemote && remote_endpoint.empty()) {
    throw ValidationError("the remote classifier needs an endpoint (--endpoint or TSR_DSAW_ENDPOINT)");
  }
  pair_config().validate();
  if (patch_size < 1) throw ValidationError("patch_size must be positive");
  if (!(overlap >= 0 && overlap < 1)) throw ValidationError("overlap must lie in [0, 1)");
  if (!(frame_size > 0)) throw ValidationError("frame_size must be positive");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (max_in_flight < 1) throw ValidationError("max_in_flight must be >= 1");
  if (timeout_seconds < 1) throw ValidationError("timeout_seconds must be >= 1");
}

PairGenConfig PipelineConfig::pair_config() const {
  PairGenConfig c;
  c.m = pair_m;
  c.n = pair_n;
  return c;
}

RemoteConfig PipelineConfig::remote_config() const {
  RemoteConfig c;
  c.endpoint = remote_endpoint;
  c.batch_size = batch_size;
  c.max_in_flight = max_in_flight;
  c.timeout_seconds = timeout_seconds;
  return c;
}

GridOptions PipelineConfig::grid_options() const {
  GridOptions o;
  o.repair = repair;
  return o;
}

PipelineConfig apply_config_json(PipelineConfig c, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "classifier") {
      c.classifier = classifier_from_string(get_as<std::string>(value, key));
    } else if (key == "endpoint") {
      c.remote_endpoint = get_as<std::string>(value, key);
    } else if (key == "fallback") {
      c.fallback = fallback_from_string(get_as<std::string>(value, key));
    } else if (key == "pair_m") {
      c.pair_m = get_as<int>(value, key);
    } else if (key == "pair_n") {
      c.pair_n = get_as<int>(value, key);
    } else if (key == "patch_size") {
      c.patch_size = get_as<int>(value, key);
    } else if (key == "overlap") {
      c.overlap = get_as<double>(value, key);
    } else if (key == "frame_size") {
      c.frame_size = get_as<double>(value, key);
    } else if (key == "repair") {
      c.repair = get_as<bool>(value, key);
    } else if (key == "workers") {
      c.workers = get_as<int>(value, key);
    } else if (key == "out") {
      c.output_dir = get_as<std::string>(value, key);
    } else if (key == "batch_size") {
      c.batch_size = get_as<std::size_t>(value, key);
    } else if (key == "max_in_flight") {
      c.max_in_flight = get_as<int>(value, key);
    } else if (key == "timeout_seconds") {
      c.timeout_seconds = get_as<int>(value, key);
    } else {
      throw ValidationError("config: unknown key \"" + key + "\"");
    }
  }
  return c;
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return apply_config_json(std::move(base), buf.str());
}

std::vector<WordBox> load_detections(const std::filesystem::path& path, double frame_size) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::istringstream words_in(text);
  std::vector<WordBox> words = parse_word_detections(words_in);

  std::vector<std::optional<Rect>> patches;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    auto p = j.find("patch");
    if (p == j.end()) {
      patches.emplace_back();
      continue;
    }
    const std::string where = path.string() + ": detection " + std::to_string(patches.size());
    if (!p->is_array() || p->size() != 4) throw ValidationError(where + ": patch must hold 4 coordinates");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!(*p)[k].is_number()) throw ValidationError(where + ": non-numeric patch coordinate");
      v[k] = (*p)[k].get<double>();
    }
    patches.emplace_back(Rect{v[0], v[1], v[2], v[3]});
  }
  const auto with_patch = std::count_if(patches.begin(), patches.end(), [](const auto& p) { return p.has_value(); });
  if (with_patch == 0) return words;
  if (static_cast<std::size_t>(with_patch) != patches.size()) {
    throw ValidationError(path.string() + ": either every detection names its patch or none does");
  }
  std::map<std::tuple<double, double, double, double>, std::size_t> slot;
  std::vector<PatchDetections> groups;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Rect& p = *patches[i];
    auto [it, inserted] = slot.try_emplace(std::tuple(p.x_min, p.y_min, p.x_max, p.y_max), groups.size());
    if (inserted) groups.push_back({p, {}});
    groups[it->second].boxes.push_back(words[i]);
  }
  return frame_scan_dedup(merge_patch_detections(groups), frame_size);
}

TableInput make_table_input(const std::string& table_id, const GroundTruthTable* truth,
                            const std::vector<WordBox>* detections) {
  TableInput in;
  in.table_id = table_id;
  if (detections) {
    in.words = *detections;
    if (truth) {
      GroundTruthTable t = *truth;
      t.word_boxes = *detections;
      t.word_cells = assign_words_by_overlap(t, *detections);
      in.oracle_truth = std::move(t);
    }
  } else if (truth) {
    GroundTruthTable t = *truth;
    if (!t.has_words()) words_from_cell_boxes(t);
    in.words = t.word_boxes;
    in.oracle_truth = std::move(t);
  }
  return in;
}

ClassifyResult classify_pairs(const TableInput& input, std::span<const WordPair> pairs, const PipelineConfig& config) {
  ClassifyResult res;
  switch (config.classifier) {
    case ClassifierKind::kOracle:
      if (!input.oracle_truth) throw ValidationError("the oracle classifier needs ground truth (--truth)");
      res.labels = OracleClassifier(*input.oracle_truth).classify(pairs);
      return res;
    case ClassifierKind::kHeuristic:
      res.labels = HeuristicClassifier(input.words).classify(pairs);
      return res;
    case ClassifierKind::kRemote:
      break;
  }
  try {
    GroundTruthTable page;
    page.word_boxes = input.words;
    const Image image = input.image ? *input.image : render_table_image(page);
    res.labels = remote_classify(pairs, image, input.words, config.remote_config());
  } catch (const Error& e) {
    const bool remote_failure = dynamic_cast<const TransportError*>(&e) || dynamic_cast<const ProtocolError*>(&e);
    if (!remote_failure || config.fallback == FallbackPolicy::kFail) throw;
    res.labels = HeuristicClassifier(input.words).classify(pairs);
    res.fell_back = true;
    res.warning = std::string("remote classifier failed, used heuristic: ") + e.what();
  }
  return res;
}

TableOutcome run_table(const TableInput& input, const PipelineConfig& config, StopAfter stop,
                       const std::vector<LabeledPair>* given_labels, const std::vector<WordPair>* given_pairs) {
  TableOutcome out;
  out.table_id = input.table_id;
  const char* stage = "pairgen";
  try {
    if (given_labels) {
      out.labels = *given_labels;
      for (const LabeledPair& lp : out.labels) out.pairs.push_back(lp.pair);
    } else {
      out.pairs = given_pairs ? *given_pairs : generate_pairs(input.words, config.pair_config());
      if (stop == StopAfter::kPairs) return out;
      stage = "classify";
      ClassifyResult cr = classify_pairs(input, out.pairs, config);
      out.labels = std::move(cr.labels);
      out.fell_back = cr.fell_back;
      out.warning = std::move(cr.warning);
    }
    if (stop == StopAfter::kLabels) return out;
    stage = "reconstruct";
    if (input.words.empty()) throw StructureError("no words to reconstruct from");
    out.reconstruction = reconstruct(input.words, out.labels, config.grid_options());
  } catch (const std::exception& e) {
    out.failed_stage = stage;
    out.error = e.what();
  }
  return out;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const auto n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tsr
