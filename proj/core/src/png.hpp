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

#ifndef SHRIMPCNN_SRC_PNG_HPP_
#define SHRIMPCNN_SRC_PNG_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "shrimpcnn/image.hpp"

namespace shrimpcnn::png {

inline constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

bool has_signature(std::span<const std::uint8_t> bytes);
Image decode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode(const Image& img);

}  // namespace shrimpcnn::png

#endif  // SHRIMPCNN_SRC_PNG_HPP_
