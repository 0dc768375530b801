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
#include <span>
#include <string>
#include <vector>

#include "tsr/pairgen.h"
#include "tsr/types.h"

namespace tsr {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kHighlight{255, 0, 0};
inline constexpr Rgb kPadding{255, 255, 255};
inline constexpr int kPairCanvas = 224;

// 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = kPadding);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  // Fills [x0, x1) x [y0, y1), clipped to the image.
  void fill(int x0, int y0, int x1, int y1, Rgb c);

  std::span<const std::uint8_t> data() const { return pixels_; }
  std::span<std::uint8_t> data() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes);
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> bytes);

// Maps source pixel coordinates onto a square canvas: uniform scale that
// fits the whole image, centred, remaining area padded.
struct CanvasTransform {
  double scale = 1.0;
  double offset_x = 0;
  double offset_y = 0;
  int canvas = kPairCanvas;

  // Smallest pixel rectangle [x0, x1) x [y0, y1) covering the mapped box.
  struct PixelRect {
    int x0, y0, x1, y1;
  };
  PixelRect cover(const Rect& source_box) const;
};

CanvasTransform fit_to_canvas(int width, int height, int canvas = kPairCanvas);

// Area-averaged downscale of the table into the canvas with the two word
// boxes painted as solid highlight rectangles. Throws ValidationError when a
// box leaves the image.
Image render_pair_image(const Image& table, const Rect& first, const Rect& second,
                        int canvas = kPairCanvas);
Image render_pair_image(const Image& table, const WordPair& pair, std::span<const WordBox> words,
                        int canvas = kPairCanvas);

}  // namespace tsr
