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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsr/image.h"
#include "tsr/relations.h"

namespace tsr {

// Client for the pair classification service:
//   POST {endpoint}/classify  {"pairs": [{"image_png_base64": s}, ...]}
//     -> {"labels": [{"label": "same_row"|..., "confidence": x}, ...]}
//   GET  {endpoint}/healthz   -> {"status": "ok", "model_version": s}
struct RemoteConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  std::size_t batch_size = 32;
  int max_in_flight = 4;
  int timeout_seconds = 30;
  int canvas = kPairCanvas;
};

struct HealthStatus {
  std::string status;
  std::string model_version;
};

using RemoteLabel = std::pair<RelationLabel, double>;

std::string make_classify_request(std::span<const std::string> images_png_base64);

// Validates a /classify response body against the expected batch length.
// Throws ProtocolError on any schema violation or unknown label token.
std::vector<RemoteLabel> parse_classify_response(std::string_view body, std::size_t expected);

class RemoteClassifier {
 public:
  explicit RemoteClassifier(RemoteConfig config);

  // Throws TransportError when the service cannot be reached.
  HealthStatus health() const;

  // Renders each pair, sends batches (several may be in flight) and returns
  // one result per pair in input order.
  std::vector<LabeledPair> classify(std::span<const WordPair> pairs, const Image& table,
                                    std::span<const WordBox> words) const;

  std::vector<RemoteLabel> classify_images(std::span<const std::string> images_png_base64) const;

  const RemoteConfig& config() const { return config_; }

 private:
  std::vector<RemoteLabel> post_batch(std::span<const std::string> images) const;

  RemoteConfig config_;
  std::string host_;      // scheme://host:port
  std::string base_path_; // optional path prefix without trailing slash
};

std::vector<LabeledPair> remote_classify(std::span<const WordPair> pairs, const Image& table,
                                         std::span<const WordBox> words, const RemoteConfig& config);

}  // namespace tsr
