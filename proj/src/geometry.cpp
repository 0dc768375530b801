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

#include "tsr/geometry.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "tsr/errors.h"

namespace tsr {
namespace {

std::vector<int> axis_positions(int extent, int patch, int stride) {
  std::vector<int> out;
  if (extent <= patch) return {0};
  for (int pos = 0;; pos += stride) {
    if (pos + patch >= extent) {
      const int last = extent - patch;
      if (out.empty() || out.back() != last) out.push_back(last);
      break;
    }
    out.push_back(pos);
  }
  return out;
}

}  // namespace

PatchLayout split_into_patches(int image_width, int image_height, int patch_size,
                               double overlap_fraction) {
  if (image_width < 1 || image_height < 1) throw ValidationError("image dimensions must be >= 1");
  if (patch_size < 1) throw ValidationError("patch size must be >= 1");
  if (!(overlap_fraction > 0 && overlap_fraction < 1)) {
    throw ValidationError("overlap fraction must lie in (0, 1)");
  }
  const int stride = std::max(1, static_cast<int>(std::lround(patch_size * (1.0 - overlap_fraction))));
  PatchLayout layout{patch_size, overlap_fraction, {}};
  const auto xs = axis_positions(image_width, patch_size, stride);
  const auto ys = axis_positions(image_height, patch_size, stride);
  for (int y : ys) {
    for (int x : xs) {
      layout.patches.push_back({static_cast<double>(x), static_cast<double>(y),
                                static_cast<double>(std::min(x + patch_size, image_width)),
                                static_cast<double>(std::min(y + patch_size, image_height))});
    }
  }
  return layout;
}

std::vector<WordBox> merge_patch_detections(std::span<const PatchDetections> per_patch,
                                            double dedup_iou) {
  std::vector<WordBox> all;
  for (std::size_t p = 0; p < per_patch.size(); ++p) {
    const Rect& patch = per_patch[p].patch;
    for (const WordBox& w : per_patch[p].boxes) {
      if (w.box.x_min < 0 || w.box.y_min < 0 || w.box.x_max > patch.width() ||
          w.box.y_max > patch.height() || !w.box.valid()) {
        throw ValidationError("box " + std::to_string(w.id) + " of patch " + std::to_string(p) +
                              " lies outside the patch");
      }
      WordBox moved = w;
      moved.box = w.box.translated(patch.x_min, patch.y_min);
      all.push_back(std::move(moved));
    }
  }

  auto geometry_key = [](const WordBox& w) {
    return std::make_tuple(w.box.y_min, w.box.x_min, w.box.y_max, w.box.x_max, w.text.value_or(""));
  };
  // Larger boxes win; ties resolved by geometry so patch order is irrelevant.
  std::sort(all.begin(), all.end(), [&](const WordBox& a, const WordBox& b) {
    if (a.box.area() != b.box.area()) return a.box.area() > b.box.area();
    return geometry_key(a) < geometry_key(b);
  });
  std::vector<WordBox> kept;
  for (WordBox& w : all) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const WordBox& k) { return iou(k.box, w.box) >= dedup_iou; });
    if (!dup) kept.push_back(std::move(w));
  }
  std::sort(kept.begin(), kept.end(),
            [&](const WordBox& a, const WordBox& b) { return geometry_key(a) < geometry_key(b); });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<WordId>(i);
  return kept;
}

std::vector<WordBox> frame_scan_dedup(std::vector<WordBox> boxes, double frame_size) {
  if (frame_size <= 0) throw ValidationError("frame size must be positive");
  bool changed = true;
  while (changed && boxes.size() > 1) {
    changed = false;
    // Frame -> indices of boxes touching it with positive area.
    std::map<std::pair<long, long>, std::vector<std::size_t>> frames;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const Rect& b = boxes[i].box;
      const long fx0 = static_cast<long>(std::floor(b.x_min / frame_size));
      const long fy0 = static_cast<long>(std::floor(b.y_min / frame_size));
      const long fx1 = static_cast<long>(std::ceil(b.x_max / frame_size));
      const long fy1 = static_cast<long>(std::ceil(b.y_max / frame_size));
      for (long fy = fy0; fy < fy1; ++fy) {
        for (long fx = fx0; fx < fx1; ++fx) frames[{fx, fy}].push_back(i);
      }
    }
    for (const auto& [key, members] : frames) {
      if (members.size() < 2) continue;
      const Rect frame{key.first * frame_size, key.second * frame_size,
                       (key.first + 1) * frame_size, (key.second + 1) * frame_size};
      bool nested = false;
      for (std::size_t a = 0; a < members.size() && !nested; ++a) {
        const Rect fa = intersection(boxes[members[a]].box, frame);
        if (!fa.valid()) continue;
        for (std::size_t b = 0; b < members.size(); ++b) {
          if (a == b) continue;
          const Rect fb = intersection(boxes[members[b]].box, frame);
          if (fb.valid() && fa.contains(fb) && fa.area() > fb.area()) {
            nested = true;
            break;
          }
        }
      }
      if (!nested) continue;
      std::size_t biggest = members.front();
      for (std::size_t idx : members) {
        if (boxes[idx].box.area() > boxes[biggest].box.area()) biggest = idx;
      }
      boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(biggest));
      changed = true;
      break;
    }
  }
  return boxes;
}

}  // namespace tsr
