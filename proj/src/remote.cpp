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

#include "tsr/remote.h"

#include <algorithm>
#include <future>

#include "httplib.h"
#include "json.hpp"
#include "tsr/errors.h"

namespace tsr {

using nlohmann::json;

std::string make_classify_request(std::span<const std::string> images_png_base64) {
  json pairs = json::array();
  for (const std::string& img : images_png_base64) pairs.push_back({{"image_png_base64", img}});
  return json{{"pairs", std::move(pairs)}}.dump();
}

std::vector<RemoteLabel> parse_classify_response(std::string_view body, std::size_t expected) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("labels") || !j["labels"].is_array()) {
    throw ProtocolError("response lacks a labels array");
  }
  const json& labels = j["labels"];
  if (labels.size() != expected) {
    throw ProtocolError("expected " + std::to_string(expected) + " labels, got " +
                        std::to_string(labels.size()));
  }
  std::vector<RemoteLabel> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const json& item = labels[i];
    if (!item.is_object() || !item.contains("label") || !item["label"].is_string()) {
      throw ProtocolError("labels[" + std::to_string(i) + "] lacks a label string");
    }
    const std::string token = item["label"].get<std::string>();
    const auto label = label_from_wire(token);
    if (!label) throw ProtocolError("unknown label \"" + token + "\"");
    if (!item.contains("confidence") || !item["confidence"].is_number()) {
      throw ProtocolError("labels[" + std::to_string(i) + "] lacks a numeric confidence");
    }
    const double conf = item["confidence"].get<double>();
    if (!(conf >= 0.0 && conf <= 1.0)) {
      throw ProtocolError("labels[" + std::to_string(i) + "] confidence outside [0, 1]");
    }
    out.emplace_back(*label, conf);
  }
  return out;
}

RemoteClassifier::RemoteClassifier(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ValidationError("remote classifier needs an endpoint");
  if (config_.batch_size == 0) throw ValidationError("batch size must be positive");
  std::string ep = config_.endpoint;
  const auto scheme = ep.find("://");
  const auto path_start = ep.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start != std::string::npos) {
    host_ = ep.substr(0, path_start);
    base_path_ = ep.substr(path_start);
    while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  } else {
    host_ = ep;
  }
}

HealthStatus RemoteClassifier::health() const {
  httplib::Client cli(host_);
  cli.set_connection_timeout(config_.timeout_seconds);
  cli.set_read_timeout(config_.timeout_seconds);
  auto res = cli.Get(base_path_ + "/healthz");
  if (!res) {
    throw TransportError("cannot reach " + config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) throw ProtocolError("healthz returned HTTP " + std::to_string(res->status));
  try {
    const json j = json::parse(res->body);
    return {j.at("status").get<std::string>(), j.value("model_version", std::string())};
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed healthz response: ") + e.what());
  }
}

std::vector<RemoteLabel> RemoteClassifier::post_batch(std::span<const std::string> images) const {
  httplib::Client cli(host_);
  cli.set_connection_timeout(config_.timeout_seconds);
  cli.set_read_timeout(config_.timeout_seconds);
  cli.set_write_timeout(config_.timeout_seconds);
  auto res = cli.Post(base_path_ + "/classify", make_classify_request(images), "application/json");
  if (!res) {
    throw TransportError("cannot reach " + config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProtocolError("classify returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return parse_classify_response(res->body, images.size());
}

std::vector<RemoteLabel> RemoteClassifier::classify_images(std::span<const std::string> images) const {
  std::vector<RemoteLabel> out(images.size());
  const std::size_t n_batches = (images.size() + config_.batch_size - 1) / config_.batch_size;
  const std::size_t width = static_cast<std::size_t>(std::max(1, config_.max_in_flight));
  for (std::size_t wave = 0; wave < n_batches; wave += width) {
    std::vector<std::future<std::vector<RemoteLabel>>> inflight;
    const std::size_t last = std::min(n_batches, wave + width);
    for (std::size_t b = wave; b < last; ++b) {
      const std::size_t begin = b * config_.batch_size;
      const std::size_t count = std::min(config_.batch_size, images.size() - begin);
      inflight.push_back(std::async(std::launch::async, [this, images, begin, count] {
        return post_batch(images.subspan(begin, count));
      }));
    }
    for (std::size_t k = 0; k < inflight.size(); ++k) {
      auto labels = inflight[k].get();
      std::copy(labels.begin(), labels.end(), out.begin() + static_cast<std::ptrdiff_t>((wave + k) * config_.batch_size));
    }
  }
  return out;
}

std::vector<LabeledPair> RemoteClassifier::classify(std::span<const WordPair> pairs, const Image& table,
                                                    std::span<const WordBox> words) const {
  std::vector<std::string> images;
  images.reserve(pairs.size());
  for (const WordPair& p : pairs) {
    images.push_back(base64_encode(encode_png(render_pair_image(table, p, words, config_.canvas))));
  }
  const auto labels = classify_images(images);
  std::vector<LabeledPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back({pairs[i], labels[i].first, labels[i].second});
  return out;
}

std::vector<LabeledPair> remote_classify(std::span<const WordPair> pairs, const Image& table,
                                         std::span<const WordBox> words, const RemoteConfig& config) {
  return RemoteClassifier(config).classify(pairs, table, words);
}

}  // namespace tsr
