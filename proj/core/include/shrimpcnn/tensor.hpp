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

#ifndef SHRIMPCNN_TENSOR_HPP_
#define SHRIMPCNN_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shrimpcnn/error.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn {

using Shape = std::vector<std::size_t>;

inline std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

/// Element count of `shape`; throws ShapeError for an empty list or a zero
/// dimension.
inline std::size_t shape_size(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("tensor dimension must be positive, got " + to_string(shape));
    n *= d;
  }
  return n;
}

/// Dense row-major N-dimensional array. The shape is fixed at construction;
/// element values may be mutated in place.
template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  explicit BasicTensor(Shape shape, T fill = T(0))
      : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

  BasicTensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_size(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + to_string(shape_));
    }
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  T& at(std::size_t r, std::size_t c) noexcept { return data_[r * shape_[1] + c]; }
  const T& at(std::size_t r, std::size_t c) const noexcept { return data_[r * shape_[1] + c]; }

  T& at(std::size_t ch, std::size_t y, std::size_t x) noexcept {
    return data_[(ch * shape_[1] + y) * shape_[2] + x];
  }
  const T& at(std::size_t ch, std::size_t y, std::size_t x) const noexcept {
    return data_[(ch * shape_[1] + y) * shape_[2] + x];
  }

  void fill(T value) noexcept { std::fill(data_.begin(), data_.end(), value); }

  /// Copy with a new shape of the same element count.
  BasicTensor reshaped(Shape shape) const {
    if (shape_size(shape) != data_.size()) {
      throw ShapeError("cannot reshape " + to_string(shape_) + " to " + to_string(shape));
    }
    return BasicTensor(std::move(shape), data_);
  }

  template <typename U>
  BasicTensor<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return BasicTensor<U>(shape_, std::move(out));
  }

  bool operator==(const BasicTensor&) const = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

template <typename T>
BasicTensor<T> tensor_create(Shape shape, T fill = T(0)) {
  return BasicTensor<T>(std::move(shape), fill);
}

/// He-normal initialization: i.i.d. Normal(0, 2 / fan_in).
template <typename T>
BasicTensor<T> tensor_random_init(Shape shape, std::size_t fan_in, Pcg32& rng) {
  if (fan_in == 0) throw ParameterError("fan_in must be at least 1");
  BasicTensor<T> out(std::move(shape));
  const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
  for (T& v : out.values()) v = static_cast<T>(stddev * rng.normal());
  return out;
}

template <typename T>
BasicTensor<T> matmul(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw ShapeError("matmul: cannot multiply " + to_string(a.shape()) + " by " +
                     to_string(b.shape()));
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  BasicTensor<T> out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = a.at(i, p);
      const T* brow = b.data() + p * n;
      T* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return out;
}

/// Index of the largest element; the lowest index wins ties.
template <typename T>
std::size_t reduce_argmax(std::span<const T> values) {
  if (values.empty()) throw ShapeError("argmax of an empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

template <typename T>
std::size_t reduce_argmax(const BasicTensor<T>& t) {
  if (t.rank() != 1) throw ShapeError("argmax expects a rank-1 tensor, got " + to_string(t.shape()));
  return reduce_argmax(t.values());
}

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_TENSOR_HPP_
