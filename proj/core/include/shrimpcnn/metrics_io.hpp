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

#ifndef SHRIMPCNN_METRICS_IO_HPP_
#define SHRIMPCNN_METRICS_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "shrimpcnn/trainer.hpp"

namespace shrimpcnn {

/// Header `epoch,train_loss,train_accuracy,val_loss,val_accuracy`, one row
/// per epoch, six decimals, LF line endings.
void write_metrics_csv(std::span<const EpochMetrics> history, std::ostream& out);
void write_metrics_csv(std::span<const EpochMetrics> history, const std::filesystem::path& path);

std::vector<EpochMetrics> read_metrics_csv(std::istream& in);
std::vector<EpochMetrics> read_metrics_csv(const std::filesystem::path& path);

/// Two side-by-side panels (training left, validation right), each plotting
/// accuracy on a [0, 1] axis and loss on a shared loss axis against epoch.
/// Every polyline has one point per epoch.
void render_curves_svg(std::span<const EpochMetrics> history, std::ostream& out);
void render_curves_svg(std::span<const EpochMetrics> history, const std::filesystem::path& path);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_METRICS_IO_HPP_
