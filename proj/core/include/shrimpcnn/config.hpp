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

#ifndef SHRIMPCNN_CONFIG_HPP_
#define SHRIMPCNN_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "shrimpcnn/model.hpp"
#include "shrimpcnn/trainer.hpp"

namespace shrimpcnn {

/// Everything a training run is parameterised by. JSON keys (all optional):
///
///   epochs, batch_size, learning_rate, alpha, epsilon, seed,
///   target_accuracy, threads, train_fraction, min_class_count,
///   input_size, remove_background, tolerance, layers
///
/// `layers` is a list of objects with a `type` of conv (filters, kernel,
/// stride, padding), pool (window, stride), relu, flatten or dense (units).
struct RunConfig {
  ModelConfig model = ModelConfig::default_config();
  Preprocessing preprocessing;
  HyperParams hyper;
  double train_fraction = 0.8;
  std::size_t min_class_count = 30;
};

/// Applies the keys present in `json_text` on top of `base`. Unknown keys
/// and ill-typed values raise ConfigError.
RunConfig parse_run_config(std::string_view json_text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

std::string to_json(const RunConfig& config);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_CONFIG_HPP_
