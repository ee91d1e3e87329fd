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

#ifndef SHRIMPCNN_ERROR_HPP_
#define SHRIMPCNN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shrimpcnn {

/// Base class of every error raised by the library. The CLI maps any
/// `Error` that escapes a subcommand to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or layer dimensions that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Class label outside [0, classes).
class LabelError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an input contract (e.g. probabilities that are not
/// normalized).
class ContractError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated image data. `offset()` is the byte position at
/// which decoding gave up.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed image data in a variant the decoder does not handle
/// (16-bit samples, interlaced PNG, palette images, ...).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Dataset root lacks a class folder.
class LayoutError : public Error {
 public:
  using Error::Error;
};

class EmptyClassError : public Error {
 public:
  using Error::Error;
};

/// Not enough originals to reach a requested per-class minimum by mirroring.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Model configuration whose layer chain does not shape-check.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model artifact with a bad magic or checksum.
class CorruptArtifactError : public Error {
 public:
  using Error::Error;
};

/// Model artifact that passes the checksum but whose contents disagree with
/// themselves (config vs. parameter blob length).
class FormatError : public Error {
 public:
  using Error::Error;
};

class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(std::size_t epoch, std::size_t batch)
      : Error("training diverged: non-finite loss at epoch " +
              std::to_string(epoch) + ", batch " + std::to_string(batch)),
        epoch_(epoch),
        batch_(batch) {}

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

}  // namespace shrimpcnn

#endif  // SHRIMPCNN_ERROR_HPP_
