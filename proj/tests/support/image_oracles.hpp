// Copyright 2026 The shrimpcnn Authors. All Rights Reserved.
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

#ifndef SHRIMPCNN_TESTS_SUPPORT_IMAGE_ORACLES_HPP_
#define SHRIMPCNN_TESTS_SUPPORT_IMAGE_ORACLES_HPP_

#include <cstdlib>
#include <vector>

#include "shrimpcnn/image.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn::testing {

/// Background removal by fixpoint iteration: starting from a corner, keep
/// adding any in-tolerance pixel with a 4-neighbour already in the region
/// until nothing changes. Shares no code with the queue-based version.
inline Image flood_fill_oracle(const Image& img, int tolerance) {
  const long w = static_cast<long>(img.width()), h = static_cast<long>(img.height());
  std::vector<bool> removed(static_cast<std::size_t>(w * h), false);
  const long corner_x[4] = {0, w - 1, 0, w - 1};
  const long corner_y[4] = {0, 0, h - 1, h - 1};
  for (int c = 0; c < 4; ++c) {
    const Rgb seed = img.at(corner_x[c], corner_y[c]);
    auto close = [&](long x, long y) {
      const Rgb p = img.at(x, y);
      return std::abs(p.r - seed.r) <= tolerance && std::abs(p.g - seed.g) <= tolerance &&
             std::abs(p.b - seed.b) <= tolerance;
    };
    std::vector<bool> region(static_cast<std::size_t>(w * h), false);
    region[corner_y[c] * w + corner_x[c]] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
          if (region[y * w + x] || !close(x, y)) continue;
          const bool touches = (x > 0 && region[y * w + x - 1]) || (x + 1 < w && region[y * w + x + 1]) ||
                               (y > 0 && region[(y - 1) * w + x]) || (y + 1 < h && region[(y + 1) * w + x]);
          if (touches) {
            region[y * w + x] = true;
            changed = true;
          }
        }
      }
    }
    for (std::size_t i = 0; i < region.size(); ++i) {
      if (region[i]) removed[i] = true;
    }
  }
  Image out = img;
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      if (removed[y * w + x]) out.set(x, y, Rgb{0, 0, 0});
    }
  }
  return out;
}

/// Random image up to max_side x max_side built from a small palette of
/// nearby colours, so in-tolerance regions of interesting shape appear.
inline Image random_patchy_image(Pcg32& rng, std::size_t max_side) {
  const std::size_t w = 1 + rng.below(static_cast<std::uint32_t>(max_side));
  const std::size_t h = 1 + rng.below(static_cast<std::uint32_t>(max_side));
  const std::size_t palette_size = 2 + rng.below(3);
  std::vector<Rgb> palette;
  const int base = static_cast<int>(rng.below(200));
  for (std::size_t i = 0; i < palette_size; ++i) {
    auto jitter = [&] { return static_cast<std::uint8_t>(base + static_cast<int>(rng.below(56))); };
    palette.push_back(Rgb{jitter(), jitter(), jitter()});
  }
  Image img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) img.set(x, y, palette[rng.below(static_cast<std::uint32_t>(palette_size))]);
  }
  return img;
}

inline Image random_image(Pcg32& rng, std::size_t width, std::size_t height) {
  std::vector<std::uint8_t> px(width * height * 3);
  for (auto& b : px) b = static_cast<std::uint8_t>(rng.below(256));
  return Image(width, height, std::move(px));
}

}  // namespace shrimpcnn::testing

#endif  // SHRIMPCNN_TESTS_SUPPORT_IMAGE_ORACLES_HPP_
