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

#include <algorithm>
#include <optional>
#include <string>

namespace tsr {

using WordId = int;
using CellId = int;

// Slot value for an unoccupied grid position.
inline constexpr CellId kBlank = -1;

// Axis-aligned rectangle in pixel coordinates, y growing downwards.
struct Rect {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  bool valid() const { return x_min < x_max && y_min < y_max; }
  bool contains(const Rect& o) const {
    return x_min <= o.x_min && y_min <= o.y_min && o.x_max <= x_max && o.y_max <= y_max;
  }
  Rect translated(double dx, double dy) const {
    return {x_min + dx, y_min + dy, x_max + dx, y_max + dy};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline double overlap_x(const Rect& a, const Rect& b) {
  return std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
}

inline double overlap_y(const Rect& a, const Rect& b) {
  return std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
}

inline double intersection_area(const Rect& a, const Rect& b) {
  return overlap_x(a, b) * overlap_y(a, b);
}

inline Rect intersection(const Rect& a, const Rect& b) {
  return {std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
          std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
}

inline Rect union_rect(const Rect& a, const Rect& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
          std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

inline double iou(const Rect& a, const Rect& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// Overlap of the vertical extents as a fraction of the shorter box height.
inline double vertical_overlap_ratio(const Rect& a, const Rect& b) {
  const double shorter = std::min(a.height(), b.height());
  return shorter > 0 ? overlap_y(a, b) / shorter : 0.0;
}

inline double horizontal_overlap_ratio(const Rect& a, const Rect& b) {
  const double narrower = std::min(a.width(), b.width());
  return narrower > 0 ? overlap_x(a, b) / narrower : 0.0;
}

// A detected text region.
struct WordBox {
  WordId id = 0;
  Rect box;
  std::optional<std::string> text;

  friend bool operator==(const WordBox&, const WordBox&) = default;
};

}  // namespace tsr
