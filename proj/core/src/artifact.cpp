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

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "overloaded.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/model.hpp"

// Artifact layout, all integers little-endian:
//
//   "SSCM1"
//   u32 input_size, u32 class_count
//   u8 remove_background, u32 tolerance
//   u32 layer_count, then per layer: u8 kind, u32 a, u32 b, u32 c, u32 d
//   u64 blob_bytes, then blob_bytes of float32 parameters
//   u32 CRC-32 of every preceding byte

namespace shrimpcnn {
namespace {

using detail::Overloaded;

constexpr char kMagic[5] = {'S', 'S', 'C', 'M', '1'};

enum class LayerKind : std::uint8_t { kConv = 0, kPool = 1, kRelu = 2, kFlatten = 3, kDense = 4 };

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw FormatError("model artifact ends early at byte " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::uint32_t narrow(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFULL) throw FormatError(std::string(what) + " does not fit the artifact format");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
  const ModelConfig& config = model.config();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(narrow(config.input_size, "input size"));
  w.u32(narrow(config.class_count, "class count"));
  w.u8(model.preprocessing().remove_background ? 1 : 0);
  w.u32(narrow(static_cast<std::size_t>(model.preprocessing().tolerance), "tolerance"));
  w.u32(narrow(config.layers.size(), "layer count"));
  for (const LayerSpec& spec : config.layers) {
    std::visit(Overloaded{
                   [&](const ConvSpec& c) {
                     w.u8(static_cast<std::uint8_t>(LayerKind::kConv));
                     w.u32(narrow(c.out_channels, "conv channels"));
                     w.u32(narrow(c.kernel, "conv kernel"));
                     w.u32(narrow(c.stride, "conv stride"));
                     w.u32(narrow(c.padding, "conv padding"));
                   },
                   [&](const PoolSpec& p) {
                     w.u8(static_cast<std::uint8_t>(LayerKind::kPool));
                     w.u32(narrow(p.window, "pool window"));
                     w.u32(narrow(p.stride, "pool stride"));
                     w.u32(0);
                     w.u32(0);
                   },
                   [&](const ReluSpec&) {
                     w.u8(static_cast<std::uint8_t>(LayerKind::kRelu));
                     for (int i = 0; i < 4; ++i) w.u32(0);
                   },
                   [&](const FlattenSpec&) {
                     w.u8(static_cast<std::uint8_t>(LayerKind::kFlatten));
                     for (int i = 0; i < 4; ++i) w.u32(0);
                   },
                   [&](const DenseSpec& d) {
                     w.u8(static_cast<std::uint8_t>(LayerKind::kDense));
                     w.u32(narrow(d.units, "dense units"));
                     w.u32(0);
                     w.u32(0);
                     w.u32(0);
                   },
               },
               spec);
  }
  w.u64(static_cast<std::uint64_t>(model.parameter_count()) * sizeof(float));
  for (const Tensor* t : model.parameters()) {
    for (float v : t->values()) w.f32(v);
  }
  w.u32(crc_of(w.buffer()));
  return std::move(w.buffer());
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic + 4) throw CorruptArtifactError("model artifact is truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4));
  if (trailer.u32() != crc_of(body)) throw CorruptArtifactError("model artifact checksum mismatch");
  if (std::memcmp(body.data(), kMagic, sizeof kMagic) != 0) throw CorruptArtifactError("bad model artifact magic");

  Reader r(body.subspan(sizeof kMagic));
  ModelConfig config;
  config.input_size = r.u32();
  config.class_count = r.u32();
  Preprocessing prep;
  const std::uint8_t remove = r.u8();
  if (remove > 1) throw FormatError("invalid background-removal flag");
  prep.remove_background = remove == 1;
  const std::uint32_t tolerance = r.u32();
  if (tolerance > 255) throw FormatError("invalid background tolerance " + std::to_string(tolerance));
  prep.tolerance = static_cast<int>(tolerance);

  const std::uint32_t layer_count = r.u32();
  if (layer_count > r.remaining() / 17) throw FormatError("layer count exceeds artifact size");
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    const std::uint8_t kind = r.u8();
    const std::uint32_t a = r.u32(), b = r.u32(), c = r.u32(), d = r.u32();
    switch (static_cast<LayerKind>(kind)) {
      case LayerKind::kConv: config.layers.emplace_back(ConvSpec{a, b, c, d}); break;
      case LayerKind::kPool: config.layers.emplace_back(PoolSpec{a, b}); break;
      case LayerKind::kRelu: config.layers.emplace_back(ReluSpec{}); break;
      case LayerKind::kFlatten: config.layers.emplace_back(FlattenSpec{}); break;
      case LayerKind::kDense: config.layers.emplace_back(DenseSpec{a}); break;
      default: throw FormatError("unknown layer kind " + std::to_string(kind) + " at layer " + std::to_string(i));
    }
  }

  std::vector<Shape> shapes;
  try {
    shapes = config.parameter_shapes();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("stored model config is invalid: ") + e.what());
  }
  std::size_t expected = 0;
  for (const Shape& s : shapes) expected += shape_size(s);
  const std::uint64_t blob_bytes = r.u64();
  if (blob_bytes != expected * sizeof(float) || r.remaining() != blob_bytes) {
    throw FormatError("parameter blob holds " + std::to_string(blob_bytes) + " bytes (" +
                      std::to_string(r.remaining()) + " present); config requires " +
                      std::to_string(expected * sizeof(float)));
  }
  std::vector<Tensor> params;
  for (const Shape& s : shapes) {
    Tensor t(s);
    for (float& v : t.values()) v = r.f32();
    params.push_back(std::move(t));
  }
  return Model(std::move(config), prep, std::move(params));
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing model " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace shrimpcnn
