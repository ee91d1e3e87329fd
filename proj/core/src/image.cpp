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

#include "shrimpcnn/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>
#include <string>

#include "png.hpp"
#include "shrimpcnn/error.hpp"

namespace shrimpcnn {

Image::Image(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height * 3, 0) {
  if (width == 0 || height == 0) throw ShapeError("image dimensions must be positive");
}

Image::Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw ShapeError("image dimensions must be positive");
  if (pixels_.size() != width * height * 3) {
    throw ShapeError("image pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
                     std::to_string(width * height * 3));
  }
}

namespace {

class PpmReader {
 public:
  explicit PpmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_number(const char* what) {
    skip_separators();
    if (pos_ >= bytes_.size()) throw DecodeError(std::string("truncated PPM header, missing ") + what, pos_);
    if (!std::isdigit(bytes_[pos_])) throw DecodeError(std::string("expected PPM ") + what, pos_);
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 31)) throw DecodeError(std::string("PPM ") + what + " too large", pos_);
      ++pos_;
    }
    return value;
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DecodeError("expected whitespace after PPM maxval", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  PpmReader reader(bytes);
  const std::size_t width = reader.read_number("width");
  const std::size_t height = reader.read_number("height");
  const std::size_t maxval = reader.read_number("maxval");
  if (width == 0 || height == 0) throw DecodeError("PPM dimensions must be positive", reader.pos());
  if (maxval == 0 || maxval > 65535) throw DecodeError("invalid PPM maxval", reader.pos());
  if (maxval != 255) {
    throw UnsupportedFormatError("PPM maxval " + std::to_string(maxval) + " is not supported (8-bit, maxval 255 only)");
  }
  reader.expect_single_whitespace();
  const std::size_t need = width * height * 3;
  const std::size_t have = bytes.size() - reader.pos();
  if (have < need) {
    throw DecodeError("truncated PPM pixel data: " + std::to_string(have) + " of " + std::to_string(need) +
                          " bytes",
                      bytes.size());
  }
  auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos());
  return Image(width, height, std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(need)));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

Image decode_image(std::span<const std::uint8_t> bytes) {
  if (png::has_signature(bytes)) return png::decode(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '6') return decode_ppm(bytes);
    if (bytes[1] >= '1' && bytes[1] <= '7') {
      throw UnsupportedFormatError(std::string("Netpbm variant P") + static_cast<char>(bytes[1]) +
                                   " is not supported (binary P6 only)");
    }
  }
  throw DecodeError("unrecognized image format (expected PPM P6 or PNG)", 0);
}

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format) {
  if (format == ImageFormat::kPng) return png::encode(img);
  const std::string header = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

ImageFormat format_for_path(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".ppm") return ImageFormat::kPpm;
  if (ext == ".png") return ImageFormat::kPng;
  throw ParameterError("unsupported image extension for " + path.string() + " (use .ppm or .png)");
}

bool is_supported_image_path(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".ppm" || ext == ".png";
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  try {
    return decode_image(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what(), e.offset());
  }
}

void write_image(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_image(img, format_for_path(path));
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write image " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

Image crop(const Image& img, const CropRect& rect) {
  if (rect.w == 0 || rect.h == 0 || rect.x > img.width() || rect.y > img.height() ||
      rect.w > img.width() - rect.x || rect.h > img.height() - rect.y) {
    throw BoundsError("crop rect (" + std::to_string(rect.x) + "," + std::to_string(rect.y) + " " +
                      std::to_string(rect.w) + "x" + std::to_string(rect.h) + ") outside " +
                      std::to_string(img.width()) + "x" + std::to_string(img.height()) + " image");
  }
  Image out(rect.w, rect.h);
  const auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t y = 0; y < rect.h; ++y) {
    const auto row = src.begin() + static_cast<std::ptrdiff_t>(((rect.y + y) * img.width() + rect.x) * 3);
    std::copy(row, row + static_cast<std::ptrdiff_t>(rect.w * 3),
              dst.begin() + static_cast<std::ptrdiff_t>(y * rect.w * 3));
  }
  return out;
}

Image remove_background(const Image& img, int tolerance) {
  if (tolerance < 0) throw ParameterError("background tolerance must be non-negative");
  const std::size_t w = img.width(), h = img.height();
  std::vector<std::uint8_t> background(w * h, 0);
  std::vector<std::uint8_t> visited(w * h);
  std::deque<std::size_t> queue;

  const std::size_t corners[4] = {0, w - 1, (h - 1) * w, (h - 1) * w + (w - 1)};
  for (std::size_t ci = 0; ci < 4; ++ci) {
    const std::size_t seed = corners[ci];
    const Rgb seed_color = img.at(seed % w, seed / w);
    std::fill(visited.begin(), visited.end(), 0);
    auto within = [&](std::size_t idx) {
      const Rgb c = img.at(idx % w, idx / w);
      return std::abs(int{c.r} - int{seed_color.r}) <= tolerance &&
             std::abs(int{c.g} - int{seed_color.g}) <= tolerance &&
             std::abs(int{c.b} - int{seed_color.b}) <= tolerance;
    };
    visited[seed] = 1;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      background[idx] = 1;
      const std::size_t x = idx % w, y = idx / w;
      auto visit = [&](std::size_t n) {
        if (!visited[n] && within(n)) {
          visited[n] = 1;
          queue.push_back(n);
        }
      };
      if (x > 0) visit(idx - 1);
      if (x + 1 < w) visit(idx + 1);
      if (y > 0) visit(idx - w);
      if (y + 1 < h) visit(idx + w);
    }
  }

  Image out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < w * h; ++i) {
    if (background[i]) {
      px[i * 3] = 0;
      px[i * 3 + 1] = 0;
      px[i * 3 + 2] = 0;
    }
  }
  return out;
}

Image mirror_horizontal(const Image& img) {
  Image out(img.width(), img.height());
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) out.set(img.width() - 1 - x, y, img.at(x, y));
  }
  return out;
}

ContentBox letterbox_content_box(std::size_t width, std::size_t height, std::size_t side) {
  if (side < 8) throw ParameterError("letterbox side must be at least 8, got " + std::to_string(side));
  ContentBox box;
  if (width >= height) {
    box.w = side;
    box.h = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(height) * static_cast<double>(side) /
                                                static_cast<double>(width))));
  } else {
    box.h = side;
    box.w = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(width) * static_cast<double>(side) /
                                                static_cast<double>(height))));
  }
  box.w = std::min(box.w, side);
  box.h = std::min(box.h, side);
  box.x = (side - box.w) / 2;
  box.y = (side - box.h) / 2;
  return box;
}

Tensor letterbox_to_tensor(const Image& img, std::size_t side) {
  const ContentBox box = letterbox_content_box(img.width(), img.height(), side);
  Tensor out({3, side, side});
  const double sx_scale = static_cast<double>(img.width()) / static_cast<double>(box.w);
  const double sy_scale = static_cast<double>(img.height()) / static_cast<double>(box.h);
  const double max_x = static_cast<double>(img.width() - 1);
  const double max_y = static_cast<double>(img.height() - 1);
  const auto px = img.pixels();
  const std::size_t w = img.width();

  for (std::size_t oy = 0; oy < box.h; ++oy) {
    const double sy = std::clamp((static_cast<double>(oy) + 0.5) * sy_scale - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t ox = 0; ox < box.w; ++ox) {
      const double sx = std::clamp((static_cast<double>(ox) + 0.5) * sx_scale - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - static_cast<double>(x0);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double p00 = px[(y0 * w + x0) * 3 + ch], p01 = px[(y0 * w + x1) * 3 + ch];
        const double p10 = px[(y1 * w + x0) * 3 + ch], p11 = px[(y1 * w + x1) * 3 + ch];
        const double top = p00 + (p01 - p00) * fx;
        const double bottom = p10 + (p11 - p10) * fx;
        const double v = top + (bottom - top) * fy;
        out.at(ch, box.y + oy, box.x + ox) = static_cast<float>(v / 255.0);
      }
    }
  }
  return out;
}

std::vector<CropJob> parse_crop_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<CropJob> jobs;
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string source, output, extra;
    long long x = -1, y = -1, w = -1, h = -1;
    if (!(fields >> source >> x >> y >> w >> h >> output) || (fields >> extra)) {
      throw ParameterError("crop manifest line " + std::to_string(line_no) +
                           ": expected `source-path x y w h output-path`");
    }
    if (x < 0 || y < 0 || w <= 0 || h <= 0) {
      throw ParameterError("crop manifest line " + std::to_string(line_no) + ": invalid rectangle");
    }
    jobs.push_back({resolve(source),
                    CropRect{static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                             static_cast<std::size_t>(w), static_cast<std::size_t>(h)},
                    resolve(output)});
  }
  return jobs;
}

}  // namespace shrimpcnn
