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

#ifndef SHRIMPCNN_RNG_HPP_
#define SHRIMPCNN_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <utility>

namespace shrimpcnn {

/// PCG32 (XSH-RR, 64-bit state) with the reference seeding procedure, so a
/// given (seed, stream) pair yields the same sequence on every platform.
/// Normal variates use the Box-Muller transform and cache the second value
/// of each pair.
///
/// A single instance must not be shared between threads.
class Pcg32 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : state_(0), inc_((stream << 1U) | 1U) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() noexcept {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
    const auto rot = static_cast<std::uint32_t>(old >> 59U);
    return (xorshifted >> rot) | (xorshifted << ((0U - rot) & 31U));
  }

  /// Unbiased integer in [0, bound). `bound` must be nonzero.
  std::uint32_t below(std::uint32_t bound) noexcept {
    const std::uint32_t threshold = (0U - bound) % bound;
    for (;;) {
      const std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    const std::uint64_t hi = next_u32() >> 5U;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6U;  // 26 bits
    return static_cast<double>((hi << 26U) | lo) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Standard normal variate.
  double normal() noexcept {
    if (cached_normal_) {
      const double z = *cached_normal_;
      cached_normal_.reset();
      return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(theta);
    return radius * std::cos(theta);
  }

  /// Fisher-Yates shuffle driven by `below`, independent of the standard
  /// library's unspecified std::shuffle.
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(static_cast<std::uint32_t>(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  std::optional<double> cached_normal_;
};

/// Stream identifiers keeping the generators of unrelated consumers of one
/// user seed apart.
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kSplit = 0x100;      // + class label
inline constexpr std::uint64_t kAugment = 0x200;    // + class label
inline constexpr std::uint64_t kBatches = 0x10000;  // + epoch
inline constexpr std::uint64_t kSynth = 0x1000000;  // + label * 2^20 + index
}  // namespace streams

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_RNG_HPP_
