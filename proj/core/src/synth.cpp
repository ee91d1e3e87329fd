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

#include "shrimpcnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "shrimpcnn/dataset.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn {

namespace fs = std::filesystem;

namespace {

struct Stain {
  double cx, cy, rx, ry;
  double darken;
};

struct Crease {
  double x0, y0, dx, dy;  // segment start and direction * length
  double half_width;
  double depth;  // multiplicative darkening at the centre of the line
};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double segment_distance(double px, double py, const Crease& c) {
  const double len2 = c.dx * c.dx + c.dy * c.dy;
  const double t = std::clamp(((px - c.x0) * c.dx + (py - c.y0) * c.dy) / len2, 0.0, 1.0);
  const double qx = c.x0 + t * c.dx - px, qy = c.y0 + t * c.dy - py;
  return std::sqrt(qx * qx + qy * qy);
}

}  // namespace

Image synth_render(int label, std::uint64_t seed, std::size_t index, const SynthOptions& options) {
  if (label != kOrdinaryLabel && label != kSoftShellLabel) throw LabelError("synthetic label " + std::to_string(label));
  const double W = static_cast<double>(options.width);
  const double H = static_cast<double>(options.height);
  if (options.width < 32 || options.height < 16) throw ParameterError("synthetic image must be at least 32x16");
  const bool soft = label == kSoftShellLabel;
  Pcg32 rng(seed, streams::kSynth + (static_cast<std::uint64_t>(label) << 20U) + index);

  // Scanner background.
  const double bg_r = rng.uniform(236, 250), bg_g = rng.uniform(236, 250), bg_b = rng.uniform(234, 248);
  std::vector<Stain> stains(rng.below(4));
  for (auto& s : stains) {
    s = {rng.uniform(0, W), rng.uniform(0, H), rng.uniform(0.05, 0.18) * W, rng.uniform(0.1, 0.3) * H,
         rng.uniform(5, 15)};
  }

  // Body geometry: centreline y = cy + bend * u^2 over u in [-1, 1].
  const double length = W * rng.uniform(0.68, 0.88);
  const double cx = W / 2 + rng.uniform(-0.03, 0.03) * W;
  const double cy = H / 2 + rng.uniform(-0.06, 0.06) * H;
  const double bend = rng.uniform(-0.12, 0.12) * H;
  const double thickness = H * rng.uniform(0.17, 0.24);
  const double taper = rng.uniform(0.15, 0.35) * (rng.below(2) ? 1.0 : -1.0);  // which end is the head
  const double body_r = rng.uniform(228, 246), body_g = rng.uniform(160, 188), body_b = rng.uniform(150, 176);
  const double segments = 6 + rng.below(2);
  const double segment_phase = rng.uniform(0, 1);

  // Soft-shell features.
  const double severity = soft ? rng.uniform(0.6, 1.0) : 0.0;
  const double dent_amp = 0.13 * severity;
  const double dent_freq = 5 + rng.below(5);
  const double dent_phase = rng.uniform(0, 2 * std::numbers::pi);
  const double ripple_fx = rng.uniform(0.35, 0.6), ripple_fy = rng.uniform(-0.3, 0.3);
  std::vector<Crease> creases;
  if (soft) {
    creases.resize(5 + rng.below(5));
    for (auto& c : creases) {
      const double u = rng.uniform(-0.8, 0.8);
      const double angle = rng.uniform(-1.2, 1.2) + std::numbers::pi / 2;
      const double len = thickness * rng.uniform(0.8, 1.6);
      const double yc = cy + bend * u * u;
      c = {cx + u * length / 2 - std::cos(angle) * len / 2, yc - std::sin(angle) * len / 2, std::cos(angle) * len,
           std::sin(angle) * len, rng.uniform(1.2, 2.0), rng.uniform(0.55, 0.7)};
    }
  }

  Image img(options.width, options.height);
  for (std::size_t y = 0; y < options.height; ++y) {
    for (std::size_t x = 0; x < options.width; ++x) {
      const double px = static_cast<double>(x) + 0.5, py = static_cast<double>(y) + 0.5;
      const double noise = rng.uniform(-4, 4);

      double r = bg_r + noise, g = bg_g + noise, b = bg_b + noise;
      for (const auto& s : stains) {
        const double ex = (px - s.cx) / s.rx, ey = (py - s.cy) / s.ry;
        const double k = 1.0 - smoothstep(0.7, 1.0, std::sqrt(ex * ex + ey * ey));
        r -= s.darken * k * 1.1;
        g -= s.darken * k;
        b -= s.darken * k * 0.6;
      }

      const double u = (px - cx) / (length / 2);
      if (std::abs(u) < 1.0) {
        const double yc = cy + bend * u * u;
        double half = thickness * std::sqrt(1.0 - u * u) * (1.0 + taper * u);
        if (soft) half *= 1.0 + dent_amp * std::sin(dent_freq * std::numbers::pi * u + dent_phase);
        const double d = std::abs(py - yc);
        if (half > 1.0 && d <= half) {
          const double radial = d / half;
          double shade = 0.72 + 0.28 * std::sqrt(1.0 - radial * radial);
          // Regular shell segments: narrow darker bands across the body.
          const double seg = std::fmod((u + 1.0) / 2.0 * segments + segment_phase, 1.0);
          shade *= 1.0 - 0.1 * (1.0 - smoothstep(0.0, 0.12, std::min(seg, 1.0 - seg)));
          if (soft) {
            const double ripple = std::sin(ripple_fx * px + ripple_fy * py);
            shade *= 1.0 - 0.14 * severity * ripple * ripple * ripple * ripple;
            for (const auto& c : creases) {
              const double dist = segment_distance(px, py, c);
              if (dist < c.half_width + 1.0) {
                const double k = 1.0 - smoothstep(c.half_width - 0.5, c.half_width + 1.0, dist);
                shade *= 1.0 - (1.0 - c.depth) * severity * k;
              }
            }
          }
          const double body_noise = noise * 1.2;
          r = body_r * shade + body_noise;
          g = body_g * shade + body_noise;
          b = body_b * shade + body_noise;
        }
      }
      img.set(x, y, {to_byte(r), to_byte(g), to_byte(b)});
    }
  }
  return img;
}

fs::path synth_generate(std::size_t n_ordinary, std::size_t n_soft, std::uint64_t seed, const fs::path& out,
                        const SynthOptions& options) {
  const char* ext = options.format == ImageFormat::kPng ? "png" : "ppm";
  const std::size_t counts[kClassCount] = {n_ordinary, n_soft};
  const char* stems[kClassCount] = {"ordinary", "soft"};
  for (int label = 0; label < kClassCount; ++label) {
    const fs::path dir = out / class_folder(label);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
    for (std::size_t i = 0; i < counts[label]; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04zu.%s", stems[label], i, ext);
      write_image(synth_render(label, seed, i, options), dir / name);
    }
  }
  return out;
}

}  // namespace shrimpcnn
