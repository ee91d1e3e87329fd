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

#include "shrimpcnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shrimpcnn/error.hpp"
#include "shrimpcnn/image.hpp"
#include "shrimpcnn/rng.hpp"

namespace shrimpcnn {

namespace fs = std::filesystem;

const char* class_folder(int label) {
  switch (label) {
    case kOrdinaryLabel: return kOrdinaryFolder;
    case kSoftShellLabel: return kSoftShellFolder;
    default: throw LabelError("unknown class label " + std::to_string(label));
  }
}

namespace {

void scan_folder(const fs::path& dir, int label, ScanResult& result) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) {
      result.warnings.push_back("skipping non-file entry " + entry.path().string());
    } else if (!is_supported_image_path(entry.path())) {
      result.warnings.push_back("skipping non-image file " + entry.path().string());
    } else {
      result.samples.push_back({entry.path(), label, false});
    }
  }
}

bool path_less(const LabeledSample& a, const LabeledSample& b) {
  const auto pa = a.path.generic_string(), pb = b.path.generic_string();
  if (pa != pb) return pa < pb;
  return a.augmented < b.augmented;
}

void sort_samples(std::vector<LabeledSample>& samples) { std::sort(samples.begin(), samples.end(), path_less); }

std::size_t train_quota(double fraction, std::size_t n) {
  // The epsilon absorbs representation error such as 0.7 * 10 = 6.999...
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

ScanResult scan_dataset(const fs::path& root) {
  ScanResult result;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw LayoutError("dataset root " + root.string() + " is not a directory");

  const fs::path ordinary = root / kOrdinaryFolder;
  if (!fs::is_directory(ordinary, ec)) throw LayoutError("missing class folder " + ordinary.string());
  scan_folder(ordinary, kOrdinaryLabel, result);

  bool have_soft = false;
  for (const char* name : {kSoftShellFolder, kSoftShellFolderSpaced}) {
    const fs::path soft = root / name;
    if (fs::is_directory(soft, ec)) {
      scan_folder(soft, kSoftShellLabel, result);
      have_soft = true;
    }
  }
  if (!have_soft) throw LayoutError("missing class folder " + (root / kSoftShellFolder).string());

  sort_samples(result.samples);
  std::sort(result.warnings.begin(), result.warnings.end());
  for (int label = 0; label < kClassCount; ++label) {
    if (count_label(result.samples, label) == 0) {
      throw EmptyClassError("class folder " + std::string(class_folder(label)) + " contains no images");
    }
  }
  return result;
}

std::size_t count_label(std::span<const LabeledSample> samples, int label) {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [label](const LabeledSample& s) { return s.label == label; }));
}

DatasetSplit holdout_split(std::span<const LabeledSample> samples, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train fraction must lie in (0, 1), got " + std::to_string(train_fraction));
  }
  DatasetSplit split;
  split.seed = seed;
  split.train_fraction = train_fraction;
  for (int label = 0; label < kClassCount; ++label) {
    std::vector<LabeledSample> members;
    for (const auto& s : samples) {
      if (s.label < 0 || s.label >= kClassCount) throw LabelError("sample label " + std::to_string(s.label));
      if (s.label == label) members.push_back(s);
    }
    if (members.size() < 2) {
      throw InsufficientDataError("class " + std::string(class_folder(label)) + " has " +
                                  std::to_string(members.size()) + " samples; holdout needs at least 2");
    }
    sort_samples(members);
    Pcg32 rng(seed, streams::kSplit + static_cast<std::uint64_t>(label));
    rng.shuffle(std::span<LabeledSample>(members));
    const std::size_t quota = train_quota(train_fraction, members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < quota ? split.train : split.validation).push_back(members[i]);
    }
  }
  sort_samples(split.train);
  sort_samples(split.validation);
  return split;
}

DatasetSplit balance_augment(DatasetSplit split, std::size_t min_count, BalancePolicy policy) {
  for (int label = 0; label < kClassCount; ++label) {
    const std::size_t have = count_label(split.train, label);
    if (have >= min_count) continue;

    std::vector<LabeledSample> candidates;
    for (const auto& s : split.train) {
      if (s.label != label || s.augmented) continue;
      const bool mirrored = std::any_of(split.train.begin(), split.train.end(), [&](const LabeledSample& o) {
        return o.augmented && o.path == s.path;
      });
      if (!mirrored) candidates.push_back(s);
    }
    std::size_t needed = min_count - have;
    if (needed > candidates.size()) {
      if (policy == BalancePolicy::kStrict) {
        throw InsufficientDataError("class " + std::string(class_folder(label)) + " has " + std::to_string(have) +
                                    " training samples; mirroring can reach at most " +
                                    std::to_string(have + candidates.size()) + " < " + std::to_string(min_count));
      }
      needed = candidates.size();
    }
    Pcg32 rng(split.seed, streams::kAugment + static_cast<std::uint64_t>(label));
    rng.shuffle(std::span<LabeledSample>(candidates));
    for (std::size_t i = 0; i < needed; ++i) {
      LabeledSample mirror = candidates[i];
      mirror.augmented = true;
      split.train.push_back(std::move(mirror));
    }
  }
  sort_samples(split.train);
  return split;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size, std::uint64_t seed,
                                                   std::uint64_t epoch) {
  if (batch_size == 0) throw ParameterError("batch size must be at least 1");
  if (count == 0) throw ParameterError("cannot batch an empty sample list");
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  Pcg32 rng(seed, streams::kBatches + epoch);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < count; start += batch_size) {
    const std::size_t end = std::min(count, start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

void write_split_manifest(const DatasetSplit& split, std::ostream& out) {
  auto emit = [&](const char* part, std::vector<LabeledSample> samples) {
    sort_samples(samples);
    for (const auto& s : samples) {
      out << part << ' ' << s.label << ' ' << s.path.generic_string() << (s.augmented ? kMirrorSuffix : "") << '\n';
    }
  };
  emit("train", split.train);
  emit("val", split.validation);
}

void write_split_manifest(const DatasetSplit& split, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write split manifest " + path.string());
  write_split_manifest(split, out);
  if (!out) throw IoError("error writing " + path.string());
}

DatasetSplit read_split_manifest(std::istream& in) {
  DatasetSplit split;
  std::string line;
  std::size_t line_no = 0;
  const std::string suffix = kMirrorSuffix;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string part;
    int label = -1;
    if (!(fields >> part >> label) || (part != "train" && part != "val")) {
      throw ParameterError("split manifest line " + std::to_string(line_no) + ": expected `train|val <label> <path>`");
    }
    if (label < 0 || label >= kClassCount) {
      throw LabelError("split manifest line " + std::to_string(line_no) + ": label " + std::to_string(label));
    }
    std::string path;
    std::getline(fields >> std::ws, path);
    if (path.empty()) throw ParameterError("split manifest line " + std::to_string(line_no) + ": missing path");
    LabeledSample sample{path, label, false};
    if (path.size() > suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
      sample.path = path.substr(0, path.size() - suffix.size());
      sample.augmented = true;
    }
    if (part == "val" && sample.augmented) {
      throw ParameterError("split manifest line " + std::to_string(line_no) + ": augmented sample in validation");
    }
    (part == "train" ? split.train : split.validation).push_back(std::move(sample));
  }
  return split;
}

DatasetSplit read_split_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open split manifest " + path.string());
  return read_split_manifest(in);
}

}  // namespace shrimpcnn
