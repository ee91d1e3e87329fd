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

#ifndef SHRIMPCNN_SHRIMPCNN_HPP_
#define SHRIMPCNN_SHRIMPCNN_HPP_

#include "shrimpcnn/config.hpp"
#include "shrimpcnn/dataset.hpp"
#include "shrimpcnn/error.hpp"
#include "shrimpcnn/image.hpp"
#include "shrimpcnn/layers.hpp"
#include "shrimpcnn/loss.hpp"
#include "shrimpcnn/metrics_io.hpp"
#include "shrimpcnn/model.hpp"
#include "shrimpcnn/rmsprop.hpp"
#include "shrimpcnn/rng.hpp"
#include "shrimpcnn/synth.hpp"
#include "shrimpcnn/tensor.hpp"
#include "shrimpcnn/trainer.hpp"

#endif  // SHRIMPCNN_SHRIMPCNN_HPP_
