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

#include "tsr/pairgen.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <utility>

#include "tsr/errors.h"

namespace tsr {
namespace {

// Axis abstraction: kLeft looks along x with the band on y, kTop the reverse.
struct AxisView {
  PairDirection dir;

  double lead(const Rect& r) const { return dir == PairDirection::kLeft ? r.x_min : r.y_min; }
  double trail(const Rect& r) const { return dir == PairDirection::kLeft ? r.x_max : r.y_max; }
  double center(const Rect& r) const {
    return dir == PairDirection::kLeft ? r.center_x() : r.center_y();
  }
  double size(const Rect& r) const { return dir == PairDirection::kLeft ? r.width() : r.height(); }
  double band_lo(const Rect& r) const { return dir == PairDirection::kLeft ? r.y_min : r.x_min; }
  double band_hi(const Rect& r) const { return dir == PairDirection::kLeft ? r.y_max : r.x_max; }
  double band_ratio(const Rect& a, const Rect& b) const {
    return dir == PairDirection::kLeft ? vertical_overlap_ratio(a, b)
                                       : horizontal_overlap_ratio(a, b);
  }
};

bool is_candidate(const AxisView& ax, const WordBox& anchor, const WordBox& cand,
                  const PairGenConfig& cfg) {
  if (cand.id == anchor.id) return false;
  if (ax.band_ratio(anchor.box, cand.box) < cfg.band_overlap) return false;
  if (ax.trail(cand.box) > ax.lead(anchor.box) + cfg.edge_slack * ax.size(anchor.box)) return false;
  return ax.center(cand.box) <= ax.center(anchor.box);
}

double gap(const AxisView& ax, const WordBox& anchor, const WordBox& cand) {
  return ax.lead(anchor.box) - ax.trail(cand.box);
}

bool nearer(const AxisView& ax, const WordBox& anchor, const WordBox* x, const WordBox* y) {
  const double gx = gap(ax, anchor, *x), gy = gap(ax, anchor, *y);
  if (gx != gy) return gx < gy;
  return x->id < y->id;
}

std::vector<const WordBox*> scan_neighbors(const AxisView& ax, const WordBox& anchor,
                                           std::span<const WordBox> words, int limit,
                                           const PairGenConfig& cfg) {
  std::vector<const WordBox*> found;
  if (limit <= 0) return found;
  for (const WordBox& w : words) {
    if (is_candidate(ax, anchor, w, cfg)) found.push_back(&w);
  }
  const std::size_t keep = std::min<std::size_t>(found.size(), static_cast<std::size_t>(limit));
  std::partial_sort(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(keep), found.end(),
                    [&](const WordBox* x, const WordBox* y) { return nearer(ax, anchor, x, y); });
  found.resize(keep);
  return found;
}

// Words bucketed into bands of fixed thickness across one axis; each bucket
// is sorted by trailing edge along the search axis.
class BandIndex {
 public:
  BandIndex(AxisView ax, std::span<const WordBox> words) : ax_(ax), words_(words) {
    std::vector<double> sizes;
    for (const WordBox& w : words) sizes.push_back(ax_.band_hi(w.box) - ax_.band_lo(w.box));
    std::nth_element(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(sizes.size() / 2),
                     sizes.end());
    band_ = std::max(1.0, sizes[sizes.size() / 2]);
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto [lo, hi] = band_range(words[i].box);
      for (long b = lo; b <= hi; ++b) buckets_[b].push_back(i);
    }
    for (auto& [key, bucket] : buckets_) {
      std::sort(bucket.begin(), bucket.end(), [&](std::size_t x, std::size_t y) {
        return ax_.trail(words_[x].box) < ax_.trail(words_[y].box);
      });
    }
  }

  std::vector<const WordBox*> query(const WordBox& anchor, int limit,
                                    const PairGenConfig& cfg) const {
    std::vector<const WordBox*> best;
    if (limit <= 0) return best;
    const double reach = ax_.lead(anchor.box) + cfg.edge_slack * ax_.size(anchor.box);
    std::set<std::size_t> seen;
    const auto [lo, hi] = band_range(anchor.box);
    for (long b = lo; b <= hi; ++b) {
      auto it = buckets_.find(b);
      if (it == buckets_.end()) continue;
      const auto& bucket = it->second;
      // Walk leftwards from the last word whose trailing edge is within reach.
      auto end = std::upper_bound(bucket.begin(), bucket.end(), reach, [&](double v, std::size_t i) {
        return v < ax_.trail(words_[i].box);
      });
      int taken = 0;
      double last_gap = 0;
      for (auto rit = std::make_reverse_iterator(end); rit != bucket.rend(); ++rit) {
        const WordBox& w = words_[*rit];
        if (taken >= limit && gap(ax_, anchor, w) > last_gap) break;
        if (!seen.insert(*rit).second) continue;
        if (!is_candidate(ax_, anchor, w, cfg)) continue;
        best.push_back(&w);
        ++taken;
        last_gap = gap(ax_, anchor, w);
      }
    }
    const std::size_t keep = std::min<std::size_t>(best.size(), static_cast<std::size_t>(limit));
    std::partial_sort(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(keep), best.end(),
                      [&](const WordBox* x, const WordBox* y) { return nearer(ax_, anchor, x, y); });
    best.resize(keep);
    return best;
  }

 private:
  std::pair<long, long> band_range(const Rect& r) const {
    return {static_cast<long>(std::floor(ax_.band_lo(r) / band_)),
            static_cast<long>(std::floor(ax_.band_hi(r) / band_))};
  }

  AxisView ax_;
  std::span<const WordBox> words_;
  double band_ = 1.0;
  std::unordered_map<long, std::vector<std::size_t>> buckets_;
};

std::vector<WordBox> copy_out(const std::vector<const WordBox*>& found) {
  std::vector<WordBox> out;
  out.reserve(found.size());
  for (const WordBox* w : found) out.push_back(*w);
  return out;
}

}  // namespace

void PairGenConfig::validate() const {
  if (m < 1 || n < 1) throw ValidationError("pair budgets m and n must be >= 1");
  if (band_overlap < 0 || band_overlap > 1) throw ValidationError("band overlap must lie in [0, 1]");
  if (edge_slack < 0) throw ValidationError("edge slack must be non-negative");
}

std::vector<WordBox> left_neighbors(const WordBox& anchor, std::span<const WordBox> words, int n,
                                    const PairGenConfig& config) {
  return copy_out(scan_neighbors(AxisView{PairDirection::kLeft}, anchor, words, n, config));
}

std::vector<WordBox> top_neighbors(const WordBox& anchor, std::span<const WordBox> words, int m,
                                   const PairGenConfig& config) {
  return copy_out(scan_neighbors(AxisView{PairDirection::kTop}, anchor, words, m, config));
}

std::vector<WordPair> generate_pairs(std::span<const WordBox> words, const PairGenConfig& config) {
  config.validate();
  std::vector<WordPair> out;
  if (words.size() < 2) return out;

  const AxisView left{PairDirection::kLeft}, top{PairDirection::kTop};
  std::optional<BandIndex> left_index, top_index;
  if (config.use_index) {
    left_index.emplace(left, words);
    top_index.emplace(top, words);
  }

  std::unordered_map<WordId, std::size_t> order;
  for (std::size_t i = 0; i < words.size(); ++i) order.emplace(words[i].id, i);
  std::set<std::tuple<WordId, WordId, int>> emitted;  // (min id, max id, direction)

  for (const WordBox& anchor : words) {
    for (const AxisView& ax : {left, top}) {
      const int budget = ax.dir == PairDirection::kLeft ? config.n : config.m;
      const std::vector<const WordBox*> found =
          config.use_index ? (ax.dir == PairDirection::kLeft ? left_index : top_index)->query(anchor, budget, config)
                           : scan_neighbors(ax, anchor, words, budget, config);
      for (const WordBox* nb : found) {
        const auto key = std::make_tuple(std::min(anchor.id, nb->id), std::max(anchor.id, nb->id),
                                         static_cast<int>(ax.dir));
        if (!emitted.insert(key).second) {
          // Keep the instance whose neighbour precedes the anchor in reading order.
          if (order.at(nb->id) < order.at(anchor.id)) {
            for (WordPair& p : out) {
              if (p.direction == ax.dir && p.a == nb->id && p.b == anchor.id) p = {anchor.id, nb->id, ax.dir};
            }
          }
          continue;
        }
        out.push_back({anchor.id, nb->id, ax.dir});
      }
    }
  }
  return out;
}

}  // namespace tsr
