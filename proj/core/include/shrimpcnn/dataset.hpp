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

#ifndef SHRIMPCNN_DATASET_HPP_
#define SHRIMPCNN_DATASET_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace shrimpcnn {

inline constexpr int kOrdinaryLabel = 0;
inline constexpr int kSoftShellLabel = 1;
inline constexpr int kClassCount = 2;

inline constexpr const char* kOrdinaryFolder = "ordinary-shrimp";
inline constexpr const char* kSoftShellFolder = "soft-shell-shrimp";
/// Accepted on input and treated as kSoftShellFolder.
inline constexpr const char* kSoftShellFolderSpaced = "soft-shell shrimp";

const char* class_folder(int label);

struct LabeledSample {
  std::filesystem::path path;
  int label = 0;
  bool augmented = false;  // horizontal mirror of `path`, applied at load time

  auto operator<=>(const LabeledSample&) const = default;
};

struct ScanResult {
  std::vector<LabeledSample> samples;
  std::vector<std::string> warnings;  // one per skipped entry
};

/// Lists `<root>/ordinary-shrimp` (label 0) and `<root>/soft-shell-shrimp`
/// (label 1), sorted by path. Files without a .ppm/.png extension are skipped
/// and reported in `warnings`.
ScanResult scan_dataset(const std::filesystem::path& root);

struct DatasetSplit {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> validation;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
};

std::size_t count_label(std::span<const LabeledSample> samples, int label);

/// Stratified holdout: each class is shuffled with its own seeded stream and
/// floor(train_fraction * n_class) samples go to train, the rest to
/// validation. Both partitions come back sorted by path.
DatasetSplit holdout_split(std::span<const LabeledSample> samples, double train_fraction, std::uint64_t seed);

enum class BalancePolicy {
  kStrict,      // throw InsufficientDataError when min_count is out of reach
  kBestEffort,  // mirror every original and stop short of min_count
};

/// Raises every class in the training partition to at least `min_count` by
/// adding mirrored copies of its originals, each mirrored at most once. The
/// originals to mirror are picked by a stream seeded from `split.seed`.
/// Validation is never touched.
DatasetSplit balance_augment(DatasetSplit split, std::size_t min_count,
                             BalancePolicy policy = BalancePolicy::kStrict);

/// Shuffles [0, count) with a generator keyed by (seed, epoch) and cuts the
/// permutation into contiguous batches; the final partial batch is kept.
std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size, std::uint64_t seed,
                                                   std::uint64_t epoch);

template <typename T>
std::vector<std::vector<T>> make_batches(std::span<const T> items, std::size_t batch_size, std::uint64_t seed,
                                         std::uint64_t epoch) {
  std::vector<std::vector<T>> out;
  for (const auto& idx : make_batches(items.size(), batch_size, seed, epoch)) {
    auto& batch = out.emplace_back();
    batch.reserve(idx.size());
    for (std::size_t i : idx) batch.push_back(items[i]);
  }
  return out;
}

/// Manifest path marker for augmented (mirrored) samples.
inline constexpr const char* kMirrorSuffix = "#mirror";

/// One line per sample, `train|val <label> <path>`, train first; mirrored
/// samples carry the `#mirror` suffix on their path.
void write_split_manifest(const DatasetSplit& split, std::ostream& out);
void write_split_manifest(const DatasetSplit& split, const std::filesystem::path& path);
DatasetSplit read_split_manifest(std::istream& in);
DatasetSplit read_split_manifest(const std::filesystem::path& path);

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_DATASET_HPP_
