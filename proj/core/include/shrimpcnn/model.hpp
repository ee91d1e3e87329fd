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

#ifndef SHRIMPCNN_MODEL_HPP_
#define SHRIMPCNN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shrimpcnn/image.hpp"
#include "shrimpcnn/layers.hpp"
#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {

struct ConvSpec {
  std::size_t out_channels = 8;
  std::size_t kernel = 3;
  std::size_t stride = 1;
  std::size_t padding = 1;
  bool operator==(const ConvSpec&) const = default;
};

struct PoolSpec {
  std::size_t window = 2;
  std::size_t stride = 2;
  bool operator==(const PoolSpec&) const = default;
};

struct ReluSpec {
  bool operator==(const ReluSpec&) const = default;
};

struct FlattenSpec {
  bool operator==(const FlattenSpec&) const = default;
};

struct DenseSpec {
  std::size_t units = 2;
  bool operator==(const DenseSpec&) const = default;
};

using LayerSpec = std::variant<ConvSpec, PoolSpec, ReluSpec, FlattenSpec, DenseSpec>;

/// "conv", "pool", "relu", "flatten" or "dense".
const char* layer_kind(const LayerSpec& spec);

inline constexpr std::size_t kInputChannels = 3;

/// Declarative network description. The chain starts at [3, S, S] and must
/// end in a dense layer with `class_count` units; softmax is implicit.
struct ModelConfig {
  std::size_t input_size = 128;
  std::size_t class_count = 2;
  std::vector<LayerSpec> layers;

  /// conv8-pool-conv16-pool-conv32-pool, all 3x3/same with ReLU, then
  /// dense64+ReLU and dense(class_count).
  static ModelConfig default_config(std::size_t input_size = 128);

  /// Output shape of every layer, in order. Throws ConfigError naming the
  /// first layer that does not accept its input.
  std::vector<Shape> activation_shapes() const;

  /// Shapes of all trainable tensors in storage order (per layer: kernels or
  /// weights, then bias).
  std::vector<Shape> parameter_shapes() const;
  std::size_t parameter_count() const;

  bool operator==(const ModelConfig&) const = default;
};

/// How raw images become network input.
struct Preprocessing {
  bool remove_background = true;
  int tolerance = kDefaultBackgroundTolerance;
  bool operator==(const Preprocessing&) const = default;
};

/// Image -> [3, S, S] tensor: optional corner flood-fill background removal,
/// then letterboxing.
Tensor preprocess_image(const Image& img, std::size_t input_size, const Preprocessing& prep);

class Model {
 public:
  using Layer = std::variant<ConvLayer<float>, PoolSpec, ReluSpec, FlattenSpec, DenseLayer<float>>;
  using Cache = std::variant<ConvCache<float>, PoolCache<float>, ReluCache<float>, FlattenCache, DenseCache<float>>;

  /// Caches of one forward pass, consumed by backward().
  struct Trace {
    std::vector<Cache> caches;
  };

  /// `parameters` must match config.parameter_shapes() in order and shape.
  Model(ModelConfig config, Preprocessing prep, std::vector<Tensor> parameters);

  const ModelConfig& config() const noexcept { return config_; }
  const Preprocessing& preprocessing() const noexcept { return prep_; }
  void set_preprocessing(const Preprocessing& prep) { prep_ = prep; }

  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
  std::vector<Shape> parameter_shapes() const { return config_.parameter_shapes(); }
  std::size_t parameter_count() const { return config_.parameter_count(); }

  /// CRC-32 over the little-endian bytes of every parameter.
  std::uint32_t parameter_checksum() const;

  Tensor logits(const Tensor& input) const;
  Tensor forward(const Tensor& input, Trace& trace) const;

  /// Writes d(loss)/d(param) for every parameter into `grads`, which is
  /// resized/overwritten to match parameter_shapes().
  void backward(const Trace& trace, const Tensor& grad_logits, std::vector<Tensor>& grads) const;

 private:
  ModelConfig config_;
  Preprocessing prep_;
  std::vector<Layer> layers_;
};

/// He-normal weights and zero biases drawn from the seeded generator.
Model build_model(const ModelConfig& config, std::uint64_t seed, const Preprocessing& prep = {});

/// Binary artifact: "SSCM1", config, preprocessing, little-endian float32
/// parameter blob, CRC-32 trailer over everything before it.
std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_MODEL_HPP_
