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

#ifndef SHRIMPCNN_RMSPROP_HPP_
#define SHRIMPCNN_RMSPROP_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {

struct RmsPropOptions {
  double alpha = 0.9;  // weight of the running average of past squared gradients
  double learning_rate = 1e-3;
  double epsilon = 1e-8;

  void validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("rmsprop alpha must lie in [0, 1)");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
      throw ParameterError("rmsprop learning rate must be finite and non-negative");
    }
    if (!(epsilon > 0.0)) throw ParameterError("rmsprop epsilon must be positive");
  }
};

/// Squared-gradient running averages, one accumulator per parameter tensor.
template <typename T>
class RmsPropState {
 public:
  RmsPropState(RmsPropOptions options, const std::vector<Shape>& parameter_shapes)
      : options_(options) {
    options_.validate();
    accumulators_.reserve(parameter_shapes.size());
    for (const Shape& s : parameter_shapes) accumulators_.emplace_back(s);
  }

  const RmsPropOptions& options() const noexcept { return options_; }
  std::size_t size() const noexcept { return accumulators_.size(); }
  BasicTensor<T>& accumulator(std::size_t i) { return accumulators_.at(i); }
  const BasicTensor<T>& accumulator(std::size_t i) const { return accumulators_.at(i); }

 private:
  RmsPropOptions options_;
  std::vector<BasicTensor<T>> accumulators_;
};

/// Elementwise v <- alpha*v + (1-alpha)*g^2; w <- w - lr*g / (sqrt(v) + eps).
template <typename T>
void rmsprop_step(BasicTensor<T>& params, const BasicTensor<T>& grads, BasicTensor<T>& accumulator,
                  const RmsPropOptions& options) {
  if (params.shape() != grads.shape() || params.shape() != accumulator.shape()) {
    throw ShapeError("rmsprop_step: params " + to_string(params.shape()) + ", grads " +
                     to_string(grads.shape()) + ", accumulator " + to_string(accumulator.shape()));
  }
  const T alpha = static_cast<T>(options.alpha);
  const T one_minus_alpha = static_cast<T>(1.0 - options.alpha);
  const T lr = static_cast<T>(options.learning_rate);
  const T eps = static_cast<T>(options.epsilon);
  T* w = params.data();
  T* v = accumulator.data();
  const T* g = grads.data();
  const std::size_t n = params.size();
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = alpha * v[i] + one_minus_alpha * (g[i] * g[i]);
    w[i] -= lr * g[i] / (std::sqrt(v[i]) + eps);
  }
}

/// Applies one step to every parameter tensor; params[i] pairs with grads[i]
/// and the i-th accumulator.
template <typename T>
void rmsprop_step(std::span<BasicTensor<T>* const> params, std::span<const BasicTensor<T>> grads,
                  RmsPropState<T>& state) {
  if (params.size() != grads.size() || params.size() != state.size()) {
    throw ShapeError("rmsprop_step: " + std::to_string(params.size()) + " parameter tensors, " +
                     std::to_string(grads.size()) + " gradients, " + std::to_string(state.size()) +
                     " accumulators");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    rmsprop_step(*params[i], grads[i], state.accumulator(i), state.options());
  }
}

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_RMSPROP_HPP_
