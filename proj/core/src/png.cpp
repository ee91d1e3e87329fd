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

#include "png.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "shrimpcnn/error.hpp"

namespace shrimpcnn::png {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24U) | (std::uint32_t{b[at + 1]} << 16U) |
         (std::uint32_t{b[at + 2]} << 8U) | std::uint32_t{b[at + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24U));
  out.push_back(static_cast<std::uint8_t>(v >> 16U));
  out.push_back(static_cast<std::uint8_t>(v >> 8U));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char (&type)[5],
               std::span<const std::uint8_t> data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size()));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

}  // namespace

bool has_signature(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && std::equal(kSignature, kSignature + 8, bytes.begin());
}

Image decode(std::span<const std::uint8_t> bytes) {
  if (!has_signature(bytes)) throw DecodeError("missing PNG signature", 0);

  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  std::size_t channels = 0;
  bool have_header = false;
  bool have_end = false;
  std::vector<std::uint8_t> compressed;

  while (pos < bytes.size() && !have_end) {
    if (bytes.size() - pos < 12) throw DecodeError("truncated PNG chunk header", pos);
    const std::uint32_t length = read_be32(bytes, pos);
    if (length > bytes.size() - pos - 12) throw DecodeError("truncated PNG chunk", pos);
    const std::string type(reinterpret_cast<const char*>(&bytes[pos + 4]), 4);
    const std::size_t data_at = pos + 8;
    const std::uint32_t stored_crc = read_be32(bytes, data_at + length);
    const uLong crc = crc32(0L, &bytes[pos + 4], static_cast<uInt>(length + 4));
    if (static_cast<std::uint32_t>(crc) != stored_crc) {
      throw DecodeError("CRC mismatch in PNG chunk " + type, pos);
    }
    auto data = bytes.subspan(data_at, length);

    if (type == "IHDR") {
      if (length != 13) throw DecodeError("bad IHDR length", pos);
      width = read_be32(data, 0);
      height = read_be32(data, 4);
      const std::uint8_t depth = data[8], color = data[9];
      if (width == 0 || height == 0) throw DecodeError("zero PNG dimension", data_at);
      if (data[10] != 0 || data[11] != 0) throw DecodeError("unknown PNG compression/filter method", data_at + 10);
      if (depth != 8) {
        throw UnsupportedFormatError("PNG bit depth " + std::to_string(depth) + " is not supported (8-bit only)");
      }
      if (color == 2) {
        channels = 3;
      } else if (color == 6) {
        channels = 4;
      } else {
        throw UnsupportedFormatError("PNG colour type " + std::to_string(color) +
                                     " is not supported (RGB or RGBA only)");
      }
      if (data[12] != 0) throw UnsupportedFormatError("interlaced PNG is not supported");
      have_header = true;
    } else if (type == "IDAT") {
      if (!have_header) throw DecodeError("IDAT before IHDR", pos);
      compressed.insert(compressed.end(), data.begin(), data.end());
    } else if (type == "IEND") {
      have_end = true;
    } else if ((type[0] & 0x20) == 0) {
      throw UnsupportedFormatError("unsupported critical PNG chunk " + type);
    }
    pos = data_at + length + 4;
  }
  if (!have_header) throw DecodeError("PNG has no IHDR chunk", pos);
  if (!have_end) throw DecodeError("PNG ends without IEND", bytes.size());

  const std::size_t stride = std::size_t{width} * channels;
  std::vector<std::uint8_t> raw((stride + 1) * height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  const int rc = uncompress(raw.data(), &raw_len, compressed.data(), static_cast<uLong>(compressed.size()));
  if (rc != Z_OK || raw_len != raw.size()) {
    throw DecodeError("corrupt or truncated PNG image data", bytes.size());
  }

  std::vector<std::uint8_t> plane(stride * height);
  std::vector<std::uint8_t> prior(stride, 0);
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* in = &raw[y * (stride + 1) + 1];
    std::uint8_t* out = &plane[y * stride];
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= channels ? out[i - channels] : 0;
      const int b = prior[i];
      const int c = i >= channels ? prior[i - channels] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: pred = paeth(a, b, c); break;
        default: throw DecodeError("unknown PNG filter type " + std::to_string(filter), pos);
      }
      out[i] = static_cast<std::uint8_t>(in[i] + pred);
    }
    std::copy(out, out + stride, prior.begin());
  }

  if (channels == 3) return Image(width, height, std::move(plane));

  std::vector<std::uint8_t> rgb(std::size_t{width} * height * 3);
  for (std::size_t i = 0, n = std::size_t{width} * height; i < n; ++i) {
    const unsigned alpha = plane[i * 4 + 3];
    for (std::size_t ch = 0; ch < 3; ++ch) {
      // Composite over white with rounding.
      const unsigned c = plane[i * 4 + ch];
      rgb[i * 3 + ch] = static_cast<std::uint8_t>((c * alpha + 255U * (255U - alpha) + 127U) / 255U);
    }
  }
  return Image(width, height, std::move(rgb));
}

std::vector<std::uint8_t> encode(const Image& img) {
  std::vector<std::uint8_t> out(kSignature, kSignature + 8);

  std::vector<std::uint8_t> header;
  put_be32(header, static_cast<std::uint32_t>(img.width()));
  put_be32(header, static_cast<std::uint32_t>(img.height()));
  header.insert(header.end(), {8, 2, 0, 0, 0});
  put_chunk(out, "IHDR", header);

  const std::size_t stride = img.width() * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * img.height());
  const auto px = img.pixels();
  for (std::size_t y = 0; y < img.height(); ++y) {
    raw.push_back(0);
    raw.insert(raw.end(), px.begin() + y * stride, px.begin() + (y + 1) * stride);
  }
  uLongf packed_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_len);
  if (compress2(packed.data(), &packed_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error("zlib compression failed");
  }
  packed.resize(packed_len);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

}  // namespace shrimpcnn::png
