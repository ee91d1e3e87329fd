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

#ifndef SHRIMPCNN_LAYERS_HPP_
#define SHRIMPCNN_LAYERS_HPP_

// Forward and hand-written backward passes for the layer kinds the
// classifier is built from. All passes operate on a single sample; batching
// happens one level up. Every function is a template over the scalar type so
// the gradient checks can run in double precision while training uses float.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {

/// floor((in + 2*padding - kernel) / stride) + 1, or ShapeError when the
/// kernel does not fit the padded input.
inline std::size_t window_output_dim(std::size_t in, std::size_t kernel, std::size_t stride,
                                     std::size_t padding) {
  if (stride == 0) throw ShapeError("stride must be positive");
  if (kernel == 0) throw ShapeError("kernel/window size must be positive");
  if (in + 2 * padding < kernel) {
    throw ShapeError("window of " + std::to_string(kernel) + " exceeds padded input extent " +
                     std::to_string(in + 2 * padding));
  }
  return (in + 2 * padding - kernel) / stride + 1;
}

namespace detail {

// Half-open range of output positions o for which o*stride + k - padding
// lands inside [0, in).
struct ValidRange {
  std::size_t begin;
  std::size_t end;
};

inline ValidRange valid_outputs(std::size_t in, std::size_t out, std::size_t k,
                                std::size_t stride, std::size_t padding) {
  std::size_t begin = 0;
  if (k < padding) begin = (padding - k + stride - 1) / stride;
  std::size_t end = 0;
  if (in + padding > k) end = std::min(out, (in - 1 + padding - k) / stride + 1);
  if (begin > end) begin = end;
  return {begin, end};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convolution

template <typename T>
struct ConvLayer {
  BasicTensor<T> kernels;  // [out_ch, in_ch, kh, kw]
  BasicTensor<T> bias;     // [out_ch]
  std::size_t stride = 1;
  std::size_t padding = 0;

  std::size_t out_channels() const { return kernels.dim(0); }
  std::size_t in_channels() const { return kernels.dim(1); }
  std::size_t kernel_h() const { return kernels.dim(2); }
  std::size_t kernel_w() const { return kernels.dim(3); }

  void validate() const {
    if (kernels.rank() != 4) throw ShapeError("conv kernels must be rank 4, got " + to_string(kernels.shape()));
    if (bias.rank() != 1 || bias.dim(0) != kernels.dim(0)) {
      throw ShapeError("conv bias " + to_string(bias.shape()) + " does not match " +
                       std::to_string(kernels.dim(0)) + " output channels");
    }
    if (stride == 0) throw ShapeError("conv stride must be positive");
  }
};

template <typename T>
struct ConvCache {
  BasicTensor<T> input;
};

template <typename T>
struct ConvGrads {
  BasicTensor<T> input;
  BasicTensor<T> kernels;
  BasicTensor<T> bias;
};

/// Each output element is the zero-padded windowed dot product accumulated in
/// (in_ch, ky, kx) order, plus the channel bias.
template <typename T>
std::pair<BasicTensor<T>, ConvCache<T>> conv2d_forward(const ConvLayer<T>& layer,
                                                       const BasicTensor<T>& input) {
  layer.validate();
  if (input.rank() != 3 || input.dim(0) != layer.in_channels()) {
    throw ShapeError("conv2d expects input [" + std::to_string(layer.in_channels()) +
                     ",H,W], got " + to_string(input.shape()));
  }
  const std::size_t in_ch = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t kh = layer.kernel_h(), kw = layer.kernel_w();
  const std::size_t s = layer.stride, p = layer.padding;
  const std::size_t oh = window_output_dim(h, kh, s, p);
  const std::size_t ow = window_output_dim(w, kw, s, p);
  const std::size_t out_ch = layer.out_channels();

  BasicTensor<T> out({out_ch, oh, ow});
  const T* kern = layer.kernels.data();
  for (std::size_t oc = 0; oc < out_ch; ++oc) {
    T* oplane = out.data() + oc * oh * ow;
    for (std::size_t ic = 0; ic < in_ch; ++ic) {
      const T* iplane = input.data() + ic * h * w;
      for (std::size_t ky = 0; ky < kh; ++ky) {
        const auto ry = detail::valid_outputs(h, oh, ky, s, p);
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const auto rx = detail::valid_outputs(w, ow, kx, s, p);
          const T wgt = kern[((oc * in_ch + ic) * kh + ky) * kw + kx];
          for (std::size_t oy = ry.begin; oy < ry.end; ++oy) {
            const T* irow = iplane + (oy * s + ky - p) * w;
            T* orow = oplane + oy * ow;
            if (s == 1) {
              const T* src = irow + (rx.begin + kx - p);
              T* dst = orow + rx.begin;
              const std::size_t n = rx.end - rx.begin;
              for (std::size_t i = 0; i < n; ++i) dst[i] += wgt * src[i];
            } else {
              for (std::size_t ox = rx.begin; ox < rx.end; ++ox) orow[ox] += wgt * irow[ox * s + kx - p];
            }
          }
        }
      }
    }
    const T b = layer.bias[oc];
    for (std::size_t i = 0; i < oh * ow; ++i) oplane[i] += b;
  }
  return {std::move(out), ConvCache<T>{input}};
}

/// With `compute_input_grad` false the returned input gradient is all
/// zeros; the network's first layer has no use for it.
template <typename T>
ConvGrads<T> conv2d_backward(const ConvLayer<T>& layer, const ConvCache<T>& cache,
                             const BasicTensor<T>& grad_out, bool compute_input_grad = true) {
  layer.validate();
  const BasicTensor<T>& input = cache.input;
  const std::size_t in_ch = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t kh = layer.kernel_h(), kw = layer.kernel_w();
  const std::size_t s = layer.stride, p = layer.padding;
  const std::size_t oh = window_output_dim(h, kh, s, p);
  const std::size_t ow = window_output_dim(w, kw, s, p);
  const std::size_t out_ch = layer.out_channels();
  if (grad_out.shape() != Shape{out_ch, oh, ow}) {
    throw ShapeError("conv2d_backward: grad_out " + to_string(grad_out.shape()) +
                     " does not match forward output " + to_string(Shape{out_ch, oh, ow}));
  }

  ConvGrads<T> g{BasicTensor<T>(input.shape()), BasicTensor<T>(layer.kernels.shape()),
                 BasicTensor<T>(layer.bias.shape())};
  const T* kern = layer.kernels.data();
  std::vector<T> acc(ow);
  for (std::size_t oc = 0; oc < out_ch; ++oc) {
    const T* gplane = grad_out.data() + oc * oh * ow;
    T bsum = 0;
    for (std::size_t i = 0; i < oh * ow; ++i) bsum += gplane[i];
    g.bias[oc] = bsum;

    for (std::size_t ic = 0; ic < in_ch; ++ic) {
      const T* iplane = input.data() + ic * h * w;
      T* giplane = g.input.data() + ic * h * w;
      for (std::size_t ky = 0; ky < kh; ++ky) {
        const auto ry = detail::valid_outputs(h, oh, ky, s, p);
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const auto rx = detail::valid_outputs(w, ow, kx, s, p);
          const std::size_t kidx = ((oc * in_ch + ic) * kh + ky) * kw + kx;
          const T wgt = kern[kidx];
          const std::size_t n = rx.end - rx.begin;
          std::fill(acc.begin(), acc.end(), T(0));
          for (std::size_t oy = ry.begin; oy < ry.end; ++oy) {
            const std::size_t iy = oy * s + ky - p;
            const T* grow = gplane + oy * ow + rx.begin;
            if (s == 1) {
              const T* irow = iplane + iy * w + (rx.begin + kx - p);
              T* girow = giplane + iy * w + (rx.begin + kx - p);
              for (std::size_t i = 0; i < n; ++i) acc[i] += grow[i] * irow[i];
              if (compute_input_grad) {
                for (std::size_t i = 0; i < n; ++i) girow[i] += wgt * grow[i];
              }
            } else {
              const T* irow = iplane + iy * w;
              T* girow = giplane + iy * w;
              for (std::size_t i = 0; i < n; ++i) {
                const std::size_t ix = (rx.begin + i) * s + kx - p;
                acc[i] += grow[i] * irow[ix];
                if (compute_input_grad) girow[ix] += wgt * grow[i];
              }
            }
          }
          T ksum = 0;
          for (std::size_t i = 0; i < n; ++i) ksum += acc[i];
          g.kernels[kidx] = ksum;
        }
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Max pooling

template <typename T>
struct PoolCache {
  Shape input_shape;
  std::vector<std::size_t> argmax;  // flat input index per output element
};

template <typename T>
std::pair<BasicTensor<T>, PoolCache<T>> maxpool_forward(const BasicTensor<T>& input,
                                                        std::size_t window, std::size_t stride) {
  if (input.rank() != 3) throw ShapeError("maxpool expects [C,H,W], got " + to_string(input.shape()));
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t oh = window_output_dim(h, window, stride, 0);
  const std::size_t ow = window_output_dim(w, window, stride, 0);
  BasicTensor<T> out({c, oh, ow});
  PoolCache<T> cache{input.shape(), std::vector<std::size_t>(out.size())};
  std::size_t o = 0;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox, ++o) {
        std::size_t best = (ch * h + oy * stride) * w + ox * stride;
        for (std::size_t dy = 0; dy < window; ++dy) {
          const std::size_t row = (ch * h + oy * stride + dy) * w + ox * stride;
          for (std::size_t dx = 0; dx < window; ++dx) {
            // Strict comparison: the first occurrence in row-major order wins.
            if (input[row + dx] > input[best]) best = row + dx;
          }
        }
        out[o] = input[best];
        cache.argmax[o] = best;
      }
    }
  }
  return {std::move(out), std::move(cache)};
}

template <typename T>
BasicTensor<T> maxpool_backward(const PoolCache<T>& cache, const BasicTensor<T>& grad_out) {
  if (grad_out.size() != cache.argmax.size()) {
    throw ShapeError("maxpool_backward: grad_out " + to_string(grad_out.shape()) +
                     " does not match cached forward output");
  }
  BasicTensor<T> grad_in(cache.input_shape);
  for (std::size_t i = 0; i < cache.argmax.size(); ++i) grad_in[cache.argmax[i]] += grad_out[i];
  return grad_in;
}

// ---------------------------------------------------------------------------
// Rectifier

template <typename T>
struct ReluCache {
  BasicTensor<T> input;
};

template <typename T>
std::pair<BasicTensor<T>, ReluCache<T>> relu(const BasicTensor<T>& input) {
  BasicTensor<T> out = input;
  for (T& v : out.values()) v = v > T(0) ? v : T(0);
  return {std::move(out), ReluCache<T>{input}};
}

/// Gradient is passed where the forward input was strictly positive; the
/// kink at zero gets zero.
template <typename T>
BasicTensor<T> relu_backward(const ReluCache<T>& cache, const BasicTensor<T>& grad_out) {
  if (grad_out.shape() != cache.input.shape()) {
    throw ShapeError("relu_backward: grad_out " + to_string(grad_out.shape()) +
                     " does not match input " + to_string(cache.input.shape()));
  }
  BasicTensor<T> grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.size(); ++i) {
    if (!(cache.input[i] > T(0))) grad_in[i] = T(0);
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// Fully connected

template <typename T>
struct DenseLayer {
  BasicTensor<T> weights;  // [out, in]
  BasicTensor<T> bias;     // [out]

  std::size_t out_features() const { return weights.dim(0); }
  std::size_t in_features() const { return weights.dim(1); }

  void validate() const {
    if (weights.rank() != 2) throw ShapeError("dense weights must be rank 2, got " + to_string(weights.shape()));
    if (bias.rank() != 1 || bias.dim(0) != weights.dim(0)) {
      throw ShapeError("dense bias " + to_string(bias.shape()) + " does not match weight rows " +
                       std::to_string(weights.dim(0)));
    }
  }
};

template <typename T>
struct DenseCache {
  BasicTensor<T> input;
};

template <typename T>
struct DenseGrads {
  BasicTensor<T> input;
  BasicTensor<T> weights;
  BasicTensor<T> bias;
};

template <typename T>
std::pair<BasicTensor<T>, DenseCache<T>> dense_forward(const DenseLayer<T>& layer,
                                                       const BasicTensor<T>& input) {
  layer.validate();
  if (input.rank() != 1 || input.dim(0) != layer.in_features()) {
    throw ShapeError("dense expects input [" + std::to_string(layer.in_features()) + "], got " +
                     to_string(input.shape()));
  }
  const std::size_t n_out = layer.out_features(), n_in = layer.in_features();
  BasicTensor<T> out({n_out});
  const T* x = input.data();
  for (std::size_t o = 0; o < n_out; ++o) {
    const T* row = layer.weights.data() + o * n_in;
    // Four interleaved partial sums keep the loop pipelined; the reduction
    // order is fixed, so results stay reproducible.
    T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n_in; i += 4) {
      s0 += row[i] * x[i];
      s1 += row[i + 1] * x[i + 1];
      s2 += row[i + 2] * x[i + 2];
      s3 += row[i + 3] * x[i + 3];
    }
    for (; i < n_in; ++i) s0 += row[i] * x[i];
    out[o] = ((s0 + s1) + (s2 + s3)) + layer.bias[o];
  }
  return {std::move(out), DenseCache<T>{input}};
}

template <typename T>
DenseGrads<T> dense_backward(const DenseLayer<T>& layer, const DenseCache<T>& cache,
                             const BasicTensor<T>& grad_out) {
  layer.validate();
  const std::size_t n_out = layer.out_features(), n_in = layer.in_features();
  if (grad_out.rank() != 1 || grad_out.dim(0) != n_out) {
    throw ShapeError("dense_backward: grad_out " + to_string(grad_out.shape()) + " does not match [" +
                     std::to_string(n_out) + "]");
  }
  if (cache.input.size() != n_in) throw ShapeError("dense_backward: cache does not match layer");
  DenseGrads<T> g{BasicTensor<T>({n_in}), BasicTensor<T>(layer.weights.shape()), grad_out};
  const T* x = cache.input.data();
  for (std::size_t o = 0; o < n_out; ++o) {
    const T go = grad_out[o];
    const T* wrow = layer.weights.data() + o * n_in;
    T* gwrow = g.weights.data() + o * n_in;
    T* gin = g.input.data();
    for (std::size_t i = 0; i < n_in; ++i) {
      gwrow[i] = go * x[i];
      gin[i] += wrow[i] * go;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Flatten

struct FlattenCache {
  Shape input_shape;
};

template <typename T>
std::pair<BasicTensor<T>, FlattenCache> flatten(const BasicTensor<T>& input) {
  return {input.reshaped({input.size()}), FlattenCache{input.shape()}};
}

template <typename T>
BasicTensor<T> unflatten(const FlattenCache& cache, const BasicTensor<T>& grad_out) {
  return grad_out.reshaped(cache.input_shape);
}

// ---------------------------------------------------------------------------
// Softmax

/// Max-shifted softmax; finite for any finite logits.
template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
  if (logits.rank() != 1) throw ShapeError("softmax expects a rank-1 tensor, got " + to_string(logits.shape()));
  const T peak = *std::max_element(logits.values().begin(), logits.values().end());
  BasicTensor<T> out(logits.shape());
  T total = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (T& v : out.values()) v /= total;
  return out;
}

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_LAYERS_HPP_
