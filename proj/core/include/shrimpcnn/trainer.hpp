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

#ifndef SHRIMPCNN_TRAINER_HPP_
#define SHRIMPCNN_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "shrimpcnn/dataset.hpp"
#include "shrimpcnn/model.hpp"
#include "shrimpcnn/rmsprop.hpp"

namespace shrimpcnn {

struct HyperParams {
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  RmsPropOptions optimizer;
  std::uint64_t seed = 7;
  double target_accuracy = 0.85;
  std::size_t threads = 0;  // 0: one per hardware thread

  void validate() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;

  bool operator==(const EpochMetrics&) const = default;
};

/// A preprocessed network input with its class.
struct LabeledTensor {
  Tensor input;
  int label = 0;
};

/// Decodes, mirrors (for augmented samples) and preprocesses every sample.
std::vector<LabeledTensor> load_samples(std::span<const LabeledSample> samples, std::size_t input_size,
                                        const Preprocessing& prep, std::size_t threads = 0);

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Mini-batch training with RMSProp and sparse categorical cross-entropy.
/// Train metrics are sample-weighted means of the pre-update batch passes;
/// validation metrics come from a full pass after the epoch's last update.
/// Throws TrainingDivergedError on a non-finite batch loss.
std::vector<EpochMetrics> train(Model& model, std::span<const LabeledTensor> train_set,
                                std::span<const LabeledTensor> validation_set, const HyperParams& hyper,
                                const EpochCallback& on_epoch = {});

std::vector<EpochMetrics> train(Model& model, const DatasetSplit& split, const HyperParams& hyper,
                                const EpochCallback& on_epoch = {});

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t count = 0;
};

Evaluation evaluate(const Model& model, std::span<const LabeledTensor> samples, std::size_t threads = 0);
Evaluation evaluate(const Model& model, std::span<const LabeledSample> samples, std::size_t threads = 0);

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;
};

/// `remove_background` overrides the setting stored with the model.
Prediction predict(const Model& model, const Image& img, std::optional<bool> remove_background = std::nullopt);
Prediction predict(const Model& model, const std::filesystem::path& image_path,
                   std::optional<bool> remove_background = std::nullopt);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_TRAINER_HPP_
