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

#include <gtest/gtest.h>
#include <zlib.h>

#include <cstring>
#include <fstream>

#include "shrimpcnn/error.hpp"
#include "shrimpcnn/model.hpp"
#include "support/gradcheck.hpp"
#include "support/temp_dir.hpp"

namespace shrimpcnn {
namespace {

using Bytes = std::vector<std::uint8_t>;

ModelConfig micro_config() {
  ModelConfig c;
  c.input_size = 8;
  c.layers = {ConvSpec{2, 3, 1, 1}, ReluSpec{}, PoolSpec{2, 2}, FlattenSpec{}, DenseSpec{4}, ReluSpec{}, DenseSpec{2}};
  return c;
}

Tensor random_input(std::size_t side, Pcg32& rng) {
  Tensor t({3, side, side});
  for (float& v : t.values()) v = static_cast<float>(rng.uniform());
  return t;
}

void rewrite_crc(Bytes& bytes) {
  const auto crc = static_cast<std::uint32_t>(crc32(0, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
  for (int i = 0; i < 4; ++i) bytes[bytes.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
}

TEST(ModelConfig, DefaultParameterCountFromLayerArithmetic) {
  const ModelConfig c = ModelConfig::default_config();
  // conv: out*(in*k*k) + out; after three 2x pools 128 -> 16, so flatten is 32*16*16.
  const std::size_t conv = (8 * 3 * 9 + 8) + (16 * 8 * 9 + 16) + (32 * 16 * 9 + 32);
  const std::size_t dense = (64 * 32 * 16 * 16 + 64) + (2 * 64 + 2);
  EXPECT_EQ(c.parameter_count(), conv + dense);
  EXPECT_EQ(c.parameter_count(), 530514U);
  const auto acts = c.activation_shapes();
  EXPECT_EQ(acts.back(), (Shape{2}));
  EXPECT_EQ(acts[8], (Shape{32, 16, 16}));
}

TEST(ModelConfig, DenseAfterConvWithoutFlattenNamesLayer) {
  ModelConfig c;
  c.input_size = 16;
  c.layers = {ConvSpec{4, 3, 1, 1}, ReluSpec{}, DenseSpec{2}};
  try {
    (void)c.activation_shapes();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 2 (dense)"), std::string::npos) << e.what();
  }
}

TEST(ModelConfig, OtherChainErrors) {
  ModelConfig c;
  c.input_size = 8;
  c.layers = {FlattenSpec{}, DenseSpec{3}};
  EXPECT_THROW((void)c.activation_shapes(), ConfigError);  // final width != class count
  c.layers = {PoolSpec{16, 16}, FlattenSpec{}, DenseSpec{2}};
  EXPECT_THROW((void)c.activation_shapes(), ConfigError);  // window exceeds input
  c.layers = {FlattenSpec{}, DenseSpec{2}, ReluSpec{}};
  EXPECT_THROW((void)c.activation_shapes(), ConfigError);  // must end in dense
  c.layers = {};
  EXPECT_THROW((void)c.activation_shapes(), ConfigError);
  c.layers = {FlattenSpec{}, DenseSpec{2}};
  c.input_size = 0;
  EXPECT_THROW((void)c.activation_shapes(), ConfigError);
}

TEST(BuildModel, DeterministicHeInit) {
  const Model a = build_model(micro_config(), 5);
  const Model b = build_model(micro_config(), 5);
  const Model c = build_model(micro_config(), 6);
  EXPECT_EQ(a.parameter_checksum(), b.parameter_checksum());
  EXPECT_NE(a.parameter_checksum(), c.parameter_checksum());
  const auto params = a.parameters();
  ASSERT_EQ(params.size(), 6U);
  for (std::size_t i = 1; i < params.size(); i += 2) {
    for (float v : params[i]->values()) EXPECT_EQ(v, 0.0f);
  }
}

TEST(BuildModel, DefaultWeightScaleMatchesFanIn) {
  const Model m = build_model(ModelConfig::default_config(), 7);
  const auto params = m.parameters();
  // Dense 8192 -> 64 kernel: 524288 draws with variance 2/8192.
  const Tensor& w = *params[6];
  ASSERT_EQ(w.shape(), (Shape{64, 8192}));
  double sq = 0;
  for (float v : w.values()) sq += static_cast<double>(v) * v;
  EXPECT_NEAR(sq / static_cast<double>(w.size()), 2.0 / 8192.0, 0.02 * 2.0 / 8192.0);
}

TEST(Model, RejectsWrongParameters) {
  const ModelConfig c = micro_config();
  EXPECT_THROW(Model(c, {}, {}), ShapeError);
  auto shapes = c.parameter_shapes();
  std::vector<Tensor> params;
  for (const auto& s : shapes) params.emplace_back(s);
  params[0] = Tensor({1});
  EXPECT_THROW(Model(c, {}, params), ShapeError);
}

TEST(Model, RejectsWrongInputShape) {
  const Model m = build_model(micro_config(), 1);
  EXPECT_THROW(m.logits(Tensor({3, 9, 9})), ShapeError);
}

TEST(Model, ForwardMatchesLogits) {
  Pcg32 rng(2);
  const Model m = build_model(micro_config(), 3);
  const Tensor x = random_input(8, rng);
  Model::Trace trace;
  EXPECT_EQ(m.forward(x, trace), m.logits(x));
}

// Double-precision re-implementation of the micro network's forward and
// backward passes from the layer primitives; an oracle for Model's wiring.
TEST(Model, BackwardMatchesLayerChainInDouble) {
  Pcg32 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = build_model(micro_config(), 10 + trial);
    const Tensor x = random_input(8, rng);
    const Tensor g_logits({2}, {static_cast<float>(rng.uniform(-1, 1)), static_cast<float>(rng.uniform(-1, 1))});

    Model::Trace trace;
    m.forward(x, trace);
    std::vector<Tensor> grads;
    m.backward(trace, g_logits, grads);

    const auto p = m.parameters();
    const ConvLayer<double> conv{p[0]->cast<double>(), p[1]->cast<double>(), 1, 1};
    const DenseLayer<double> d1{p[2]->cast<double>(), p[3]->cast<double>()};
    const DenseLayer<double> d2{p[4]->cast<double>(), p[5]->cast<double>()};
    const auto [c_out, c_cache] = conv2d_forward(conv, x.cast<double>());
    const auto [r1_out, r1_cache] = relu(c_out);
    const auto [p_out, p_cache] = maxpool_forward(r1_out, 2, 2);
    const auto [f_out, f_cache] = flatten(p_out);
    const auto [d1_out, d1_cache] = dense_forward(d1, f_out);
    const auto [r2_out, r2_cache] = relu(d1_out);
    const auto [d2_out, d2_cache] = dense_forward(d2, r2_out);
    (void)d2_out;

    const auto g2 = dense_backward(d2, d2_cache, g_logits.cast<double>());
    const auto g1 = dense_backward(d1, d1_cache, relu_backward(r2_cache, g2.input));
    const TensorD g_pool = maxpool_backward(p_cache, unflatten(f_cache, g1.input));
    const auto gc = conv2d_backward(conv, c_cache, relu_backward(r1_cache, g_pool));

    const TensorD* want[6] = {&gc.kernels, &gc.bias, &g1.weights, &g1.bias, &g2.weights, &g2.bias};
    ASSERT_EQ(grads.size(), 6U);
    for (std::size_t t = 0; t < 6; ++t) {
      ASSERT_EQ(grads[t].shape(), want[t]->shape());
      for (std::size_t i = 0; i < grads[t].size(); ++i) {
        const double got = grads[t][i], exp = (*want[t])[i];
        EXPECT_LE(std::abs(got - exp), 1e-4 * std::max(1.0, std::abs(exp))) << "tensor " << t << " index " << i;
      }
    }
  }
}

TEST(Artifact, RoundTripIsBitExact) {
  testing::TempDir dir("artifact");
  const Model m = build_model(micro_config(), 9, Preprocessing{false, 40});
  save_model(m, dir / "m.sscm");
  const Model back = load_model(dir / "m.sscm");
  EXPECT_EQ(back.config(), m.config());
  EXPECT_EQ(back.preprocessing(), m.preprocessing());
  const auto a = m.parameters(), b = back.parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i]->size(), b[i]->size());
    EXPECT_EQ(std::memcmp(a[i]->data(), b[i]->data(), a[i]->size() * sizeof(float)), 0);
  }
  EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(Artifact, LayoutHeaderAndLittleEndianBlob) {
  const Model m = build_model(micro_config(), 9);
  const Bytes bytes = serialize_model(m);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 5), "SSCM1");
  // input_size u32 LE right after the magic.
  EXPECT_EQ(bytes[5], 8);
  EXPECT_EQ(bytes[6], 0);
  // The blob ends right before the 4-byte trailer; its last float is the
  // final dense bias (zero).
  const std::size_t blob_end = bytes.size() - 4;
  for (std::size_t i = blob_end - 8; i < blob_end; ++i) EXPECT_EQ(bytes[i], 0);
  // First blob float: first conv kernel element.
  const std::size_t blob_begin = blob_end - m.parameter_count() * 4;
  float first = 0;
  const std::uint32_t bits = bytes[blob_begin] | (bytes[blob_begin + 1] << 8) | (bytes[blob_begin + 2] << 16) |
                             (static_cast<std::uint32_t>(bytes[blob_begin + 3]) << 24);
  std::memcpy(&first, &bits, 4);
  EXPECT_EQ(first, (*m.parameters()[0])[0]);
}

TEST(Artifact, TruncationIsCorruption) {
  const Bytes bytes = serialize_model(build_model(micro_config(), 1));
  for (std::size_t keep : {std::size_t{0}, std::size_t{3}, std::size_t{12}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(deserialize_model(std::span(bytes).first(keep)), CorruptArtifactError) << keep;
  }
}

TEST(Artifact, ByteFlipsAreDetected) {
  const Bytes bytes = serialize_model(build_model(micro_config(), 1));
  Pcg32 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Bytes bad = bytes;
    bad[rng.below(static_cast<std::uint32_t>(bad.size()))] ^= static_cast<std::uint8_t>(1 + rng.below(255));
    EXPECT_THROW(deserialize_model(bad), CorruptArtifactError);
  }
}

TEST(Artifact, BadMagicWithValidChecksum) {
  Bytes bytes = serialize_model(build_model(micro_config(), 1));
  bytes[0] = 'X';
  rewrite_crc(bytes);
  EXPECT_THROW(deserialize_model(bytes), CorruptArtifactError);
}

TEST(Artifact, ConfigBlobMismatchIsFormatError) {
  Bytes bytes = serialize_model(build_model(micro_config(), 1));
  // Bump input_size from 8 to 10: the stored blob no longer matches.
  bytes[5] = 10;
  rewrite_crc(bytes);
  EXPECT_THROW(deserialize_model(bytes), FormatError);
  Bytes shorter = serialize_model(build_model(micro_config(), 1));
  shorter.erase(shorter.end() - 8, shorter.end() - 4);
  rewrite_crc(shorter);
  EXPECT_THROW(deserialize_model(shorter), FormatError);
}

TEST(Artifact, MissingFile) {
  EXPECT_THROW(load_model("/nonexistent/model.sscm"), IoError);
}

}  // namespace
}  // namespace shrimpcnn
