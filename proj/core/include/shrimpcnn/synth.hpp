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

#ifndef SHRIMPCNN_SYNTH_HPP_
#define SHRIMPCNN_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "shrimpcnn/image.hpp"

namespace shrimpcnn {

/// Synthetic stand-in for scanned shrimp. Both classes are curved,
/// light-pink elongated bodies with regular shell segments on a near-white
/// scanner background with faint water stains. Soft-shell bodies add wrinkle
/// creases, a fine ripple texture and a dented (sinusoidally perturbed)
/// outline.
struct SynthOptions {
  std::size_t width = 320;
  std::size_t height = 128;
  ImageFormat format = ImageFormat::kPpm;
};

/// Renders one image. The result depends only on (label, seed, index).
Image synth_render(int label, std::uint64_t seed, std::size_t index, const SynthOptions& options = {});

/// Writes `n_ordinary` and `n_soft` images into the two class folders under
/// `out` (created if missing) and returns `out`. Output bytes are a pure
/// function of the arguments.
std::filesystem::path synth_generate(std::size_t n_ordinary, std::size_t n_soft, std::uint64_t seed,
                                     const std::filesystem::path& out, const SynthOptions& options = {});

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_SYNTH_HPP_
