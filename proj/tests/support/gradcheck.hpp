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

#ifndef SHRIMPCNN_TESTS_SUPPORT_GRADCHECK_HPP_
#define SHRIMPCNN_TESTS_SUPPORT_GRADCHECK_HPP_

// Central finite-difference checks of the hand-written backward passes, in
// double precision. Each check draws one random instance, contracts the layer
// output with random weights r (loss = sum r * y) and returns the largest
// relative error over every input and parameter coordinate.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "shrimpcnn/layers.hpp"
#include "shrimpcnn/loss.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn::testing {

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-4;
// Relative error denominator floor, so that two gradients that are both
// essentially zero do not produce a large ratio.
inline constexpr double kRelativeFloor = 1e-6;

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kRelativeFloor});
  return std::abs(analytic - numeric) / scale;
}

inline TensorD random_tensor(Shape shape, Pcg32& rng, double lo = -1.0, double hi = 1.0) {
  TensorD t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

inline double contract(const TensorD& a, const TensorD& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Max relative error between `analytic` and central differences of `loss`
/// with respect to every element of `x`.
inline double compare_numeric(TensorD& x, const TensorD& analytic, const std::function<double()>& loss) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kFiniteDifferenceStep;
    const double up = loss();
    x[i] = saved - kFiniteDifferenceStep;
    const double down = loss();
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * kFiniteDifferenceStep);
    worst = std::max(worst, relative_error(analytic[i], numeric));
  }
  return worst;
}

inline double check_conv_instance(Pcg32& rng) {
  const std::size_t in_ch = 1 + rng.below(3), out_ch = 1 + rng.below(3);
  const std::size_t k = 1 + rng.below(3), stride = 1 + rng.below(2), pad = rng.below(2);
  const std::size_t h = k + rng.below(4), w = k + rng.below(4);
  ConvLayer<double> layer{random_tensor({out_ch, in_ch, k, k}, rng), random_tensor({out_ch}, rng), stride, pad};
  TensorD input = random_tensor({in_ch, h, w}, rng);
  const auto [out, cache] = conv2d_forward(layer, input);
  const TensorD r = random_tensor(out.shape(), rng);
  const ConvGrads<double> g = conv2d_backward(layer, cache, r);

  auto loss = [&] { return contract(conv2d_forward(layer, input).first, r); };
  double worst = compare_numeric(input, g.input, loss);
  worst = std::max(worst, compare_numeric(layer.kernels, g.kernels, loss));
  worst = std::max(worst, compare_numeric(layer.bias, g.bias, loss));
  return worst;
}

/// Smallest gap between a window maximum and the runner-up in that window.
inline double min_pool_gap(const TensorD& input, std::size_t window, std::size_t stride) {
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t oh = window_output_dim(h, window, stride, 0), ow = window_output_dim(w, window, stride, 0);
  double gap = INFINITY;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        std::vector<double> v;
        for (std::size_t dy = 0; dy < window; ++dy) {
          for (std::size_t dx = 0; dx < window; ++dx) v.push_back(input.at(ch, oy * stride + dy, ox * stride + dx));
        }
        std::sort(v.rbegin(), v.rend());
        if (v.size() > 1) gap = std::min(gap, v[0] - v[1]);
      }
    }
  }
  return gap;
}

inline double check_pool_instance(Pcg32& rng) {
  const std::size_t c = 1 + rng.below(2), window = 2 + rng.below(2), stride = 1 + rng.below(2);
  const std::size_t h = window + rng.below(4), w = window + rng.below(4);
  TensorD input = random_tensor({c, h, w}, rng);
  // Stay away from ties: a perturbation of one step must not change any
  // window's argmax.
  while (min_pool_gap(input, window, stride) < 1e-3) input = random_tensor({c, h, w}, rng);
  const auto [out, cache] = maxpool_forward(input, window, stride);
  const TensorD r = random_tensor(out.shape(), rng);
  const TensorD g = maxpool_backward(cache, r);
  return compare_numeric(input, g, [&] { return contract(maxpool_forward(input, window, stride).first, r); });
}

inline double check_relu_instance(Pcg32& rng) {
  const std::size_t n = 5 + rng.below(30);
  TensorD input({n});
  for (double& v : input.values()) {
    do {
      v = rng.uniform(-1.0, 1.0);
    } while (std::abs(v) < 1e-3);
  }
  const auto [out, cache] = relu(input);
  const TensorD r = random_tensor(out.shape(), rng);
  const TensorD g = relu_backward(cache, r);
  return compare_numeric(input, g, [&] { return contract(relu(input).first, r); });
}

inline double check_dense_instance(Pcg32& rng) {
  const std::size_t n_in = 2 + rng.below(12), n_out = 1 + rng.below(6);
  DenseLayer<double> layer{random_tensor({n_out, n_in}, rng), random_tensor({n_out}, rng)};
  TensorD input = random_tensor({n_in}, rng);
  const auto [out, cache] = dense_forward(layer, input);
  const TensorD r = random_tensor(out.shape(), rng);
  const DenseGrads<double> g = dense_backward(layer, cache, r);
  auto loss = [&] { return contract(dense_forward(layer, input).first, r); };
  double worst = compare_numeric(input, g.input, loss);
  worst = std::max(worst, compare_numeric(layer.weights, g.weights, loss));
  worst = std::max(worst, compare_numeric(layer.bias, g.bias, loss));
  return worst;
}

inline TensorD row_softmax(const TensorD& logits) {
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  TensorD out(logits.shape());
  for (std::size_t i = 0; i < batch; ++i) {
    TensorD row({classes});
    for (std::size_t c = 0; c < classes; ++c) row[c] = logits.at(i, c);
    const TensorD p = softmax(row);
    for (std::size_t c = 0; c < classes; ++c) out.at(i, c) = p[c];
  }
  return out;
}

inline double check_softmax_scce_instance(Pcg32& rng) {
  const std::size_t batch = 1 + rng.below(4), classes = 2 + rng.below(4);
  TensorD logits = random_tensor({batch, classes}, rng, -3.0, 3.0);
  std::vector<int> labels(batch);
  for (int& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint32_t>(classes)));
  const TensorD g = softmax_scce_grad(logits, labels);
  return compare_numeric(logits, g, [&] { return scce_loss(row_softmax(logits), labels).loss; });
}

}  // namespace shrimpcnn::testing

#endif  // SHRIMPCNN_TESTS_SUPPORT_GRADCHECK_HPP_
