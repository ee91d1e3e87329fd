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

#ifndef SHRIMPCNN_TOOLS_CLI_HPP_
#define SHRIMPCNN_TOOLS_CLI_HPP_

#include <iosfwd>

namespace shrimpcnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
/// `train` finished but the final validation accuracy is below target.
inline constexpr int kExitBelowTarget = 3;

/// Entry point of the `shrimpcnn` tool: prep, synth, split, train, eval,
/// predict and plot subcommands.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shrimpcnn::cli

#endif  // SHRIMPCNN_TOOLS_CLI_HPP_
