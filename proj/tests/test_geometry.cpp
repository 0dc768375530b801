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

#include <random>

#include "doctest.h"
#include "support.h"
#include "tsr/errors.h"
#include "tsr/geometry.h"

using namespace tsr;
using tsr::test::box;

TEST_CASE("split_into_patches examples") {
  SUBCASE("1024 x 512") {
    const PatchLayout l = split_into_patches(1024, 512, 512, 0.5);
    REQUIRE(l.patches.size() == 3);
    CHECK(l.patches[0] == Rect{0, 0, 512, 512});
    CHECK(l.patches[1] == Rect{256, 0, 768, 512});
    CHECK(l.patches[2] == Rect{512, 0, 1024, 512});
  }
  SUBCASE("image equals patch") {
    const PatchLayout l = split_into_patches(512, 512, 512, 0.5);
    REQUIRE(l.patches.size() == 1);
    CHECK(l.patches[0] == Rect{0, 0, 512, 512});
  }
  SUBCASE("600 wide, last patch clamped") {
    const PatchLayout l = split_into_patches(600, 512, 512, 0.5);
    REQUIRE(l.patches.size() == 2);
    CHECK(l.patches[0].x_min == 0);
    CHECK(l.patches[1].x_min == 88);
    CHECK(l.patches[1].x_max == 600);
  }
  SUBCASE("smaller than a patch") {
    const PatchLayout l = split_into_patches(100, 40, 512, 0.5);
    REQUIRE(l.patches.size() == 1);
    CHECK(l.patches[0] == Rect{0, 0, 100, 40});
  }
}

TEST_CASE("patches cover every pixel") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 1500);
  for (int i = 0; i < 200; ++i) {
    const int w = size(rng), h = size(rng);
    const PatchLayout l = split_into_patches(w, h, 256, 0.5);
    // Coverage along each axis separately is enough for a row-major lattice.
    std::vector<int> xs(static_cast<std::size_t>(w), 0), ys(static_cast<std::size_t>(h), 0);
    for (const Rect& p : l.patches) {
      CHECK(p.x_min >= 0);
      CHECK(p.y_min >= 0);
      CHECK(p.x_max <= w);
      CHECK(p.y_max <= h);
      for (int x = static_cast<int>(p.x_min); x < static_cast<int>(p.x_max); ++x) xs[static_cast<std::size_t>(x)] = 1;
      for (int y = static_cast<int>(p.y_min); y < static_cast<int>(p.y_max); ++y) ys[static_cast<std::size_t>(y)] = 1;
    }
    CHECK(std::count(xs.begin(), xs.end(), 0) == 0);
    CHECK(std::count(ys.begin(), ys.end(), 0) == 0);
  }
}

TEST_CASE("merge_patch_detections") {
  const Rect left{0, 0, 512, 512}, right{256, 0, 768, 512}, far{1024, 0, 1536, 512};
  SUBCASE("exact duplicate in two patches") {
    const std::vector<PatchDetections> in = {{left, {box(0, 300, 10, 340, 30)}}, {right, {box(0, 44, 10, 84, 30)}}};
    const auto out = merge_patch_detections(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].box == Rect{300, 10, 340, 30});
  }
  SUBCASE("distinct words in disjoint patches") {
    const std::vector<PatchDetections> in = {{left, {box(0, 10, 10, 50, 30)}}, {far, {box(0, 10, 10, 50, 30)}}};
    CHECK(merge_patch_detections(in).size() == 2);
  }
  SUBCASE("IoU 0.95 keeps the larger box") {
    // 100x20 against 95x20 sharing a corner: IoU = 1900 / 2000 = 0.95.
    const std::vector<PatchDetections> in = {{left, {box(0, 300, 10, 395, 30)}}, {right, {box(0, 44, 10, 144, 30)}}};
    const auto out = merge_patch_detections(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].box == Rect{300, 10, 400, 30});
  }
  SUBCASE("IoU below threshold keeps both") {
    // 100x20 against 80x20: IoU = 0.8.
    const std::vector<PatchDetections> in = {{left, {box(0, 300, 10, 380, 30)}}, {right, {box(0, 44, 10, 144, 30)}}};
    CHECK(merge_patch_detections(in).size() == 2);
  }
  SUBCASE("box outside its patch") {
    const std::vector<PatchDetections> in = {{left, {box(0, 500, 10, 530, 30)}}};
    CHECK_THROWS_AS(merge_patch_detections(in), ValidationError);
  }
  SUBCASE("order independence and no invented boxes") {
    std::vector<PatchDetections> in = {{left, {box(0, 300, 10, 395, 30), box(1, 5, 40, 40, 60)}},
                                       {right, {box(0, 44, 10, 144, 30), box(1, 300, 40, 340, 60)}},
                                       {far, {box(0, 0, 0, 30, 20)}}};
    const auto a = merge_patch_detections(in);
    std::reverse(in.begin(), in.end());
    const auto b = merge_patch_detections(in);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].box == b[i].box);
      CHECK(a[i].id == static_cast<WordId>(i));
      bool found = false;
      for (const auto& pd : in) {
        for (const WordBox& w : pd.boxes) found = found || w.box.translated(pd.patch.x_min, pd.patch.y_min) == a[i].box;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("frame_scan_dedup") {
  SUBCASE("spurious box over two rows") {
    const std::vector<WordBox> in = {box(0, 10, 10, 60, 30), box(1, 5, 5, 65, 75), box(2, 10, 50, 60, 70)};
    const auto out = frame_scan_dedup(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0].id == 0);
    CHECK(out[1].id == 2);
  }
  SUBCASE("non-overlapping boxes unchanged") {
    const std::vector<WordBox> in = {box(0, 0, 0, 40, 20), box(1, 50, 0, 90, 20), box(2, 0, 30, 40, 50)};
    const auto out = frame_scan_dedup(in);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out[i].box == in[i].box);
  }
  SUBCASE("single box") { CHECK(frame_scan_dedup({box(4, 0, 0, 100, 100)}).size() == 1); }
  SUBCASE("chain of containment resolves to the smallest") {
    const std::vector<WordBox> in = {box(0, 0, 0, 200, 200), box(1, 10, 10, 150, 150), box(2, 20, 20, 60, 40)};
    const auto out = frame_scan_dedup(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].id == 2);
  }
}

TEST_CASE("frame_scan_dedup is idempotent") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0, 300), len(5, 120);
  for (int i = 0; i < 100; ++i) {
    std::vector<WordBox> in;
    for (int k = 0; k < 12; ++k) {
      const double x = pos(rng), y = pos(rng);
      in.push_back(box(k, x, y, x + len(rng), y + len(rng) / 4 + 4));
    }
    const auto once = frame_scan_dedup(in);
    const auto twice = frame_scan_dedup(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t k = 0; k < once.size(); ++k) CHECK(once[k].id == twice[k].id);
  }
}
