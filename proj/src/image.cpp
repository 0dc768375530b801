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

#include "tsr/image.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tsr/errors.h"

namespace tsr {

Image::Image(int width, int height, Rgb fill_color) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("image dimensions must be non-negative");
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  fill(0, 0, width, height, fill_color);
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void Image::fill(int x0, int y0, int x1, int y1, Rgb c) {
  x0 = std::clamp(x0, 0, width_);
  x1 = std::clamp(x1, 0, width_);
  y0 = std::clamp(y0, 0, height_);
  y1 = std::clamp(y1, 0, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y, c);
  }
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_consume(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->bytes.size()) png_error(png, "truncated PNG data");
  std::memcpy(out, cur->bytes.data() + cur->pos, len);
  cur->pos += len;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.empty()) throw ValidationError("cannot encode an empty image");
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encode failed: " + error);
  }
  png_set_write_fn(png, &out, png_append, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const auto data = image.data();
  for (int y = 0; y < image.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(data.data() + static_cast<std::size_t>(y) * image.width() * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw ParseError("not a PNG stream");
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  Image image;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("PNG decode failed: " + error);
  }
  png_set_read_fn(png, &cursor, png_consume);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  image = Image(w, h);
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = image.data().data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

Image read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

CanvasTransform fit_to_canvas(int width, int height, int canvas) {
  if (width < 1 || height < 1 || canvas < 1) throw ValidationError("invalid canvas geometry");
  CanvasTransform t;
  t.canvas = canvas;
  t.scale = std::min(static_cast<double>(canvas) / width, static_cast<double>(canvas) / height);
  const long dw = std::clamp(std::lround(width * t.scale), 1L, static_cast<long>(canvas));
  const long dh = std::clamp(std::lround(height * t.scale), 1L, static_cast<long>(canvas));
  t.offset_x = static_cast<double>((canvas - dw) / 2);
  t.offset_y = static_cast<double>((canvas - dh) / 2);
  return t;
}

CanvasTransform::PixelRect CanvasTransform::cover(const Rect& b) const {
  PixelRect r{static_cast<int>(std::floor(offset_x + b.x_min * scale)),
              static_cast<int>(std::floor(offset_y + b.y_min * scale)),
              static_cast<int>(std::ceil(offset_x + b.x_max * scale)),
              static_cast<int>(std::ceil(offset_y + b.y_max * scale))};
  r.x0 = std::clamp(r.x0, 0, canvas);
  r.y0 = std::clamp(r.y0, 0, canvas);
  r.x1 = std::clamp(std::max(r.x1, r.x0 + 1), 0, canvas);
  r.y1 = std::clamp(std::max(r.y1, r.y0 + 1), 0, canvas);
  return r;
}

namespace {

// Source intervals and weights contributing to each destination pixel along
// one axis (box filter).
struct AxisWeights {
  std::vector<int> first;
  std::vector<std::vector<double>> weights;
};

AxisWeights area_weights(int src, int dst_len, double scale) {
  AxisWeights aw;
  aw.first.resize(static_cast<std::size_t>(dst_len));
  aw.weights.resize(static_cast<std::size_t>(dst_len));
  for (int d = 0; d < dst_len; ++d) {
    const double s0 = d / scale;
    const double s1 = (d + 1) / scale;
    const int i0 = std::clamp(static_cast<int>(std::floor(s0)), 0, src - 1);
    const int i1 = std::clamp(static_cast<int>(std::ceil(s1)), i0 + 1, src);
    aw.first[static_cast<std::size_t>(d)] = i0;
    double total = 0;
    for (int i = i0; i < i1; ++i) {
      const double w = std::max(0.0, std::min<double>(i + 1, s1) - std::max<double>(i, s0));
      aw.weights[static_cast<std::size_t>(d)].push_back(w);
      total += w;
    }
    if (total <= 0) {
      aw.weights[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(i1 - i0), 0.0);
      aw.weights[static_cast<std::size_t>(d)][0] = 1.0;
    } else {
      for (double& w : aw.weights[static_cast<std::size_t>(d)]) w /= total;
    }
  }
  return aw;
}

}  // namespace

Image render_pair_image(const Image& table, const Rect& first, const Rect& second, int canvas) {
  if (table.empty()) throw ValidationError("table image is empty");
  const Rect bounds{0, 0, static_cast<double>(table.width()), static_cast<double>(table.height())};
  if (!bounds.contains(first) || !bounds.contains(second)) {
    throw ValidationError("word box lies outside the table image");
  }
  const CanvasTransform t = fit_to_canvas(table.width(), table.height(), canvas);
  const int ox = static_cast<int>(t.offset_x), oy = static_cast<int>(t.offset_y);
  const int dw = std::clamp(static_cast<int>(std::lround(table.width() * t.scale)), 1, canvas - ox);
  const int dh = std::clamp(static_cast<int>(std::lround(table.height() * t.scale)), 1, canvas - oy);
  const AxisWeights wx = area_weights(table.width(), dw, t.scale);
  const AxisWeights wy = area_weights(table.height(), dh, t.scale);

  Image out(canvas, canvas, kPadding);
  const auto src = table.data();
  std::vector<double> row_acc(static_cast<std::size_t>(dw) * 3);
  for (int dy = 0; dy < dh; ++dy) {
    std::fill(row_acc.begin(), row_acc.end(), 0.0);
    const auto& ky = wy.weights[static_cast<std::size_t>(dy)];
    for (std::size_t j = 0; j < ky.size(); ++j) {
      const int sy = wy.first[static_cast<std::size_t>(dy)] + static_cast<int>(j);
      const std::uint8_t* line = src.data() + static_cast<std::size_t>(sy) * table.width() * 3;
      for (int dx = 0; dx < dw; ++dx) {
        const auto& kx = wx.weights[static_cast<std::size_t>(dx)];
        const int sx0 = wx.first[static_cast<std::size_t>(dx)];
        double r = 0, g = 0, b = 0;
        for (std::size_t i = 0; i < kx.size(); ++i) {
          const std::uint8_t* px = line + static_cast<std::size_t>(sx0 + static_cast<int>(i)) * 3;
          r += kx[i] * px[0];
          g += kx[i] * px[1];
          b += kx[i] * px[2];
        }
        row_acc[static_cast<std::size_t>(dx) * 3] += ky[j] * r;
        row_acc[static_cast<std::size_t>(dx) * 3 + 1] += ky[j] * g;
        row_acc[static_cast<std::size_t>(dx) * 3 + 2] += ky[j] * b;
      }
    }
    for (int dx = 0; dx < dw; ++dx) {
      auto q = [&](int k) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(row_acc[static_cast<std::size_t>(dx) * 3 + k]), 0L, 255L));
      };
      out.set(ox + dx, oy + dy, {q(0), q(1), q(2)});
    }
  }
  for (const Rect* box : {&first, &second}) {
    const auto p = t.cover(*box);
    out.fill(p.x0, p.y0, p.x1, p.y1, kHighlight);
  }
  return out;
}

Image render_pair_image(const Image& table, const WordPair& pair, std::span<const WordBox> words,
                        int canvas) {
  const Rect* a = nullptr;
  const Rect* b = nullptr;
  for (const WordBox& w : words) {
    if (w.id == pair.a) a = &w.box;
    if (w.id == pair.b) b = &w.box;
  }
  if (!a || !b) throw LookupError("pair references an unknown word");
  return render_pair_image(table, *a, *b, canvas);
}

}  // namespace tsr
