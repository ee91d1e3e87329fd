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

#ifndef SHRIMPCNN_IMAGE_HPP_
#define SHRIMPCNN_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {

/// Per-channel Chebyshev tolerance used for background removal when none is
/// configured.
inline constexpr int kDefaultBackgroundTolerance = 28;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB raster, row-major, three bytes per pixel.
class Image {
 public:
  /// Black image.
  Image(std::size_t width, std::size_t height);
  Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  Rgb at(std::size_t x, std::size_t y) const noexcept {
    const std::uint8_t* p = &pixels_[(y * width_ + x) * 3];
    return {p[0], p[1], p[2]};
  }
  void set(std::size_t x, std::size_t y, Rgb c) noexcept {
    std::uint8_t* p = &pixels_[(y * width_ + x) * 3];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

struct CropRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;
};

enum class ImageFormat { kPpm, kPng };

/// Decodes binary PPM (P6, maxval 255) or 8-bit RGB/RGBA PNG. Alpha is
/// composited over white. Throws DecodeError for malformed or truncated data
/// and UnsupportedFormatError for valid files in other variants.
Image decode_image(std::span<const std::uint8_t> bytes);

/// PPM output is "P6\n<w> <h>\n255\n" followed by the raw pixels. PNG output
/// is non-interlaced 8-bit RGB.
std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format);

/// Format implied by a path's extension (.ppm or .png, case-insensitive).
ImageFormat format_for_path(const std::filesystem::path& path);
bool is_supported_image_path(const std::filesystem::path& path);

Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path);

Image crop(const Image& img, const CropRect& rect);

/// Flood-fills 4-connected regions from each of the four corners over pixels
/// whose every channel is within `tolerance` of that corner's colour, and
/// paints the union of the regions black. Regions are computed on the input
/// image, so the order of the corners does not matter.
Image remove_background(const Image& img, int tolerance = kDefaultBackgroundTolerance);

Image mirror_horizontal(const Image& img);

/// Aspect-preserving bilinear resize into an S x S black canvas, centred,
/// returned as a [3, S, S] tensor with values in [0, 1].
Tensor letterbox_to_tensor(const Image& img, std::size_t side);

/// Placement of the scaled image inside the letterbox canvas.
struct ContentBox {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;
};
ContentBox letterbox_content_box(std::size_t width, std::size_t height, std::size_t side);

/// One line of a crop manifest: `source-path x y w h output-path`.
struct CropJob {
  std::filesystem::path source;
  CropRect rect;
  std::filesystem::path output;
};

/// Parses a crop manifest. Relative paths are resolved against `base_dir`.
/// Blank lines and lines starting with '#' are ignored.
std::vector<CropJob> parse_crop_manifest(std::istream& in, const std::filesystem::path& base_dir);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_IMAGE_HPP_
