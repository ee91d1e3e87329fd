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

#ifndef SHRIMPCNN_LOSS_HPP_
#define SHRIMPCNN_LOSS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "shrimpcnn/layers.hpp"
#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {

/// Lower clamp applied to probabilities before taking the log.
inline constexpr double kLogFloor = 1e-12;

/// Tolerance on |row sum - 1| accepted by scce_loss.
inline constexpr double kNormalizationTolerance = 1e-6;

struct LossValue {
  double loss = 0.0;  // mean over the batch
  std::size_t correct_count = 0;
};

namespace detail {

inline void check_labels(std::span<const int> labels, std::size_t batch, std::size_t classes) {
  if (labels.size() != batch) {
    throw ShapeError("got " + std::to_string(labels.size()) + " labels for a batch of " +
                     std::to_string(batch));
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw LabelError("label " + std::to_string(label) + " outside [0, " + std::to_string(classes) + ")");
    }
  }
}

template <typename T>
void check_batch_matrix(const BasicTensor<T>& t, const char* what) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(what) + " must be [batch, classes], got " + to_string(t.shape()));
  }
}

}  // namespace detail

/// Sparse categorical cross-entropy: labels are class indices, not one-hot
/// rows. Returns the batch-mean loss and the number of rows whose argmax
/// equals the label.
template <typename T>
LossValue scce_loss(const BasicTensor<T>& probabilities, std::span<const int> labels) {
  detail::check_batch_matrix(probabilities, "probabilities");
  const std::size_t batch = probabilities.dim(0), classes = probabilities.dim(1);
  detail::check_labels(labels, batch, classes);

  LossValue out;
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    std::span<const T> row = probabilities.values().subspan(i * classes, classes);
    double row_sum = 0.0;
    for (T p : row) row_sum += static_cast<double>(p);
    if (std::abs(row_sum - 1.0) > kNormalizationTolerance) {
      throw ContractError("probability row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
    }
    const auto label = static_cast<std::size_t>(labels[i]);
    total -= std::log(std::max(static_cast<double>(row[label]), kLogFloor));
    if (reduce_argmax(row) == label) ++out.correct_count;
  }
  out.loss = total / static_cast<double>(batch);
  return out;
}

/// d(mean scce(softmax(logits)))/d(logits) = (softmax - onehot) / batch.
template <typename T>
BasicTensor<T> softmax_scce_grad(const BasicTensor<T>& logits, std::span<const int> labels) {
  detail::check_batch_matrix(logits, "logits");
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  detail::check_labels(labels, batch, classes);

  BasicTensor<T> grad(logits.shape());
  const T inv_batch = T(1) / static_cast<T>(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    BasicTensor<T> row({classes});
    std::copy_n(logits.data() + i * classes, classes, row.data());
    const BasicTensor<T> p = softmax(row);
    for (std::size_t c = 0; c < classes; ++c) {
      const T onehot = static_cast<std::size_t>(labels[i]) == c ? T(1) : T(0);
      grad.at(i, c) = (p[c] - onehot) * inv_batch;
    }
  }
  return grad;
}

/// Fraction of rows whose argmax equals the label.
template <typename T>
double accuracy(const BasicTensor<T>& probabilities, std::span<const int> labels) {
  detail::check_batch_matrix(probabilities, "probabilities");
  const std::size_t batch = probabilities.dim(0), classes = probabilities.dim(1);
  detail::check_labels(labels, batch, classes);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < batch; ++i) {
    if (reduce_argmax(probabilities.values().subspan(i * classes, classes)) ==
        static_cast<std::size_t>(labels[i])) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(batch);
}

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_LOSS_HPP_
