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

#include "shrimpcnn/model.hpp"

#include <zlib.h>

#include <bit>
#include <type_traits>

#include "overloaded.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn {

using detail::Overloaded;

const char* layer_kind(const LayerSpec& spec) {
  return std::visit(Overloaded{[](const ConvSpec&) { return "conv"; }, [](const PoolSpec&) { return "pool"; },
                               [](const ReluSpec&) { return "relu"; }, [](const FlattenSpec&) { return "flatten"; },
                               [](const DenseSpec&) { return "dense"; }},
                    spec);
}

ModelConfig ModelConfig::default_config(std::size_t input_size) {
  ModelConfig config;
  config.input_size = input_size;
  config.class_count = 2;
  for (std::size_t channels : {8, 16, 32}) {
    config.layers.emplace_back(ConvSpec{channels, 3, 1, 1});
    config.layers.emplace_back(ReluSpec{});
    config.layers.emplace_back(PoolSpec{2, 2});
  }
  config.layers.emplace_back(FlattenSpec{});
  config.layers.emplace_back(DenseSpec{64});
  config.layers.emplace_back(ReluSpec{});
  config.layers.emplace_back(DenseSpec{2});
  return config;
}

std::vector<Shape> ModelConfig::activation_shapes() const {
  if (input_size == 0) throw ConfigError("input size must be positive");
  if (class_count < 2) throw ConfigError("class count must be at least 2");
  if (layers.empty()) throw ConfigError("model has no layers");

  std::vector<Shape> shapes;
  Shape current{kInputChannels, input_size, input_size};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layer " + std::to_string(i) + " (" + layer_kind(layers[i]) + ")";
    auto need_rank = [&](std::size_t rank, const char* hint) {
      if (current.size() != rank) {
        throw ConfigError(where + ": expects " + hint + " input, got " + to_string(current));
      }
    };
    try {
      std::visit(Overloaded{
                     [&](const ConvSpec& c) {
                       need_rank(3, "a [C,H,W]");
                       if (c.out_channels == 0) throw ConfigError(where + ": out_channels must be positive");
                       current = {c.out_channels, window_output_dim(current[1], c.kernel, c.stride, c.padding),
                                  window_output_dim(current[2], c.kernel, c.stride, c.padding)};
                     },
                     [&](const PoolSpec& p) {
                       need_rank(3, "a [C,H,W]");
                       current = {current[0], window_output_dim(current[1], p.window, p.stride, 0),
                                  window_output_dim(current[2], p.window, p.stride, 0)};
                     },
                     [&](const ReluSpec&) {},
                     [&](const FlattenSpec&) { current = {shape_size(current)}; },
                     [&](const DenseSpec& d) {
                       need_rank(1, "a flattened");
                       if (d.units == 0) throw ConfigError(where + ": units must be positive");
                       current = {d.units};
                     },
                 },
                 layers[i]);
    } catch (const ShapeError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    shapes.push_back(current);
  }

  const auto* last = std::get_if<DenseSpec>(&layers.back());
  if (last == nullptr || last->units != class_count) {
    throw ConfigError("layer " + std::to_string(layers.size() - 1) + " (" + layer_kind(layers.back()) +
                      "): the final layer must be dense with " + std::to_string(class_count) + " units");
  }
  return shapes;
}

std::vector<Shape> ModelConfig::parameter_shapes() const {
  const std::vector<Shape> acts = activation_shapes();
  std::vector<Shape> params;
  Shape in{kInputChannels, input_size, input_size};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (const auto* c = std::get_if<ConvSpec>(&layers[i])) {
      params.push_back({c->out_channels, in[0], c->kernel, c->kernel});
      params.push_back({c->out_channels});
    } else if (const auto* d = std::get_if<DenseSpec>(&layers[i])) {
      params.push_back({d->units, in[0]});
      params.push_back({d->units});
    }
    in = acts[i];
  }
  return params;
}

std::size_t ModelConfig::parameter_count() const {
  std::size_t n = 0;
  for (const Shape& s : parameter_shapes()) n += shape_size(s);
  return n;
}

Tensor preprocess_image(const Image& img, std::size_t input_size, const Preprocessing& prep) {
  if (prep.remove_background) return letterbox_to_tensor(remove_background(img, prep.tolerance), input_size);
  return letterbox_to_tensor(img, input_size);
}

Model::Model(ModelConfig config, Preprocessing prep, std::vector<Tensor> parameters)
    : config_(std::move(config)), prep_(prep) {
  const std::vector<Shape> shapes = config_.parameter_shapes();
  if (parameters.size() != shapes.size()) {
    throw ShapeError("model expects " + std::to_string(shapes.size()) + " parameter tensors, got " +
                     std::to_string(parameters.size()));
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (parameters[i].shape() != shapes[i]) {
      throw ShapeError("parameter " + std::to_string(i) + " has shape " + to_string(parameters[i].shape()) +
                       ", expected " + to_string(shapes[i]));
    }
  }
  std::size_t next = 0;
  for (const LayerSpec& spec : config_.layers) {
    std::visit(Overloaded{
                   [&](const ConvSpec& c) {
                     layers_.emplace_back(ConvLayer<float>{std::move(parameters[next]),
                                                           std::move(parameters[next + 1]), c.stride, c.padding});
                     next += 2;
                   },
                   [&](const DenseSpec&) {
                     layers_.emplace_back(
                         DenseLayer<float>{std::move(parameters[next]), std::move(parameters[next + 1])});
                     next += 2;
                   },
                   [&](const auto& other) { layers_.emplace_back(other); },
               },
               spec);
  }
}

std::vector<Tensor*> Model::parameters() {
  std::vector<Tensor*> out;
  for (Layer& layer : layers_) {
    if (auto* c = std::get_if<ConvLayer<float>>(&layer)) {
      out.push_back(&c->kernels);
      out.push_back(&c->bias);
    } else if (auto* d = std::get_if<DenseLayer<float>>(&layer)) {
      out.push_back(&d->weights);
      out.push_back(&d->bias);
    }
  }
  return out;
}

std::vector<const Tensor*> Model::parameters() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<Model*>(this)->parameters()) out.push_back(t);
  return out;
}

std::uint32_t Model::parameter_checksum() const {
  static_assert(std::endian::native == std::endian::little, "parameter checksum assumes a little-endian host");
  uLong crc = crc32(0L, Z_NULL, 0);
  for (const Tensor* t : parameters()) {
    crc = crc32(crc, reinterpret_cast<const Bytef*>(t->data()), static_cast<uInt>(t->size() * sizeof(float)));
  }
  return static_cast<std::uint32_t>(crc);
}

Tensor Model::logits(const Tensor& input) const {
  Trace trace;
  return forward(input, trace);
}

Tensor Model::forward(const Tensor& input, Trace& trace) const {
  const Shape expected{kInputChannels, config_.input_size, config_.input_size};
  if (input.shape() != expected) {
    throw ShapeError("model expects input " + to_string(expected) + ", got " + to_string(input.shape()));
  }
  trace.caches.clear();
  trace.caches.reserve(layers_.size());
  Tensor x = input;
  for (const Layer& layer : layers_) {
    std::visit(Overloaded{
                   [&](const ConvLayer<float>& c) {
                     auto [y, cache] = conv2d_forward(c, x);
                     trace.caches.emplace_back(std::move(cache));
                     x = std::move(y);
                   },
                   [&](const PoolSpec& p) {
                     auto [y, cache] = maxpool_forward(x, p.window, p.stride);
                     trace.caches.emplace_back(std::move(cache));
                     x = std::move(y);
                   },
                   [&](const ReluSpec&) {
                     auto [y, cache] = relu(x);
                     trace.caches.emplace_back(std::move(cache));
                     x = std::move(y);
                   },
                   [&](const FlattenSpec&) {
                     auto [y, cache] = flatten(x);
                     trace.caches.emplace_back(std::move(cache));
                     x = std::move(y);
                   },
                   [&](const DenseLayer<float>& d) {
                     auto [y, cache] = dense_forward(d, x);
                     trace.caches.emplace_back(std::move(cache));
                     x = std::move(y);
                   },
               },
               layer);
  }
  return x;
}

void Model::backward(const Trace& trace, const Tensor& grad_logits, std::vector<Tensor>& grads) const {
  if (trace.caches.size() != layers_.size()) throw ShapeError("trace does not belong to this model");
  const std::vector<Shape> shapes = config_.parameter_shapes();
  if (grads.size() != shapes.size()) {
    grads.clear();
    for (const Shape& s : shapes) grads.emplace_back(s);
  }

  std::size_t param = shapes.size();
  Tensor g = grad_logits;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Layer& layer = layers_[i];
    const Cache& cache = trace.caches[i];
    std::visit(Overloaded{
                   [&](const ConvLayer<float>& c) {
                     auto r = conv2d_backward(c, std::get<ConvCache<float>>(cache), g, i > 0);
                     param -= 2;
                     grads[param] = std::move(r.kernels);
                     grads[param + 1] = std::move(r.bias);
                     g = std::move(r.input);
                   },
                   [&](const PoolSpec&) { g = maxpool_backward(std::get<PoolCache<float>>(cache), g); },
                   [&](const ReluSpec&) { g = relu_backward(std::get<ReluCache<float>>(cache), g); },
                   [&](const FlattenSpec&) { g = unflatten(std::get<FlattenCache>(cache), g); },
                   [&](const DenseLayer<float>& d) {
                     auto r = dense_backward(d, std::get<DenseCache<float>>(cache), g);
                     param -= 2;
                     grads[param] = std::move(r.weights);
                     grads[param + 1] = std::move(r.bias);
                     g = std::move(r.input);
                   },
               },
               layer);
  }
}

Model build_model(const ModelConfig& config, std::uint64_t seed, const Preprocessing& prep) {
  const std::vector<Shape> shapes = config.parameter_shapes();
  Pcg32 rng(seed, streams::kInit);
  std::vector<Tensor> params;
  for (std::size_t i = 0; i < shapes.size(); i += 2) {
    const Shape& w = shapes[i];
    const std::size_t fan_in = shape_size(w) / w[0];
    params.push_back(tensor_random_init<float>(w, fan_in, rng));
    params.emplace_back(shapes[i + 1]);
  }
  return Model(config, prep, std::move(params));
}

}  // namespace shrimpcnn
