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
#include <vector>

#include "tsr/types.h"

namespace tsr {

inline constexpr int kDefaultPatchSize = 512;
inline constexpr double kDefaultPatchOverlap = 0.5;
inline constexpr double kDefaultDedupIou = 0.9;
inline constexpr double kDefaultFrameSize = 16.0;

struct PatchLayout {
  int patch_size = kDefaultPatchSize;
  double overlap_fraction = kDefaultPatchOverlap;
  std::vector<Rect> patches;  // row-major
};

// Square patches at multiples of patch_size * (1 - overlap_fraction); the
// last patch along each axis is clamped to the image edge. Images smaller
// than a patch get one patch covering the image.
PatchLayout split_into_patches(int image_width, int image_height,
                               int patch_size = kDefaultPatchSize,
                               double overlap_fraction = kDefaultPatchOverlap);

struct PatchDetections {
  Rect patch;                  // image coordinates
  std::vector<WordBox> boxes;  // patch coordinates
};

// Translates every box into image coordinates and collapses detections with
// IoU >= dedup_iou, keeping the larger one. The result is sorted in reading
// order (y_min, x_min) and renumbered 0..k-1, so it does not depend on the
// order in which patches were processed. Throws ValidationError for a box
// that leaves its patch.
std::vector<WordBox> merge_patch_detections(std::span<const PatchDetections> per_patch,
                                            double dedup_iou = kDefaultDedupIou);

// Scans the image in frame_size windows. Wherever two or more boxes touch a
// window and one box's footprint in that window strictly contains another's,
// the largest box touching the window is removed. Repeats until nothing
// changes. Input order is preserved.
std::vector<WordBox> frame_scan_dedup(std::vector<WordBox> boxes,
                                      double frame_size = kDefaultFrameSize);

}  // namespace tsr
