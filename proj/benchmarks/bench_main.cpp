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

#include <benchmark/benchmark.h>

#include <vector>

#include "shrimpcnn/shrimpcnn.hpp"

namespace shrimpcnn {
namespace {

Tensor random_input(Shape shape, std::uint64_t seed) {
  Pcg32 rng(seed);
  Tensor t(std::move(shape));
  for (float& v : t.values()) v = static_cast<float>(rng.uniform());
  return t;
}

ConvLayer<float> make_conv(std::size_t in_ch, std::size_t out_ch) {
  Pcg32 rng(1);
  return {tensor_random_init<float>({out_ch, in_ch, 3, 3}, in_ch * 9, rng), Tensor({out_ch}), 1, 1};
}

void BM_ConvForward(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const ConvLayer<float> conv = make_conv(3, 8);
  const Tensor input = random_input({3, side, side}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_forward(conv, input).first);
}
BENCHMARK(BM_ConvForward)->Arg(32)->Arg(64)->Arg(128);

void BM_ConvBackward(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const ConvLayer<float> conv = make_conv(3, 8);
  const auto [out, cache] = conv2d_forward(conv, random_input({3, side, side}, 2));
  const Tensor grad = random_input(out.shape(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_backward(conv, cache, grad));
}
BENCHMARK(BM_ConvBackward)->Arg(32)->Arg(64)->Arg(128);

void BM_DenseForward(benchmark::State& state) {
  const auto n_in = static_cast<std::size_t>(state.range(0));
  Pcg32 rng(4);
  const DenseLayer<float> dense{tensor_random_init<float>({16, n_in}, n_in, rng), Tensor({16})};
  const Tensor input = random_input({n_in}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(dense_forward(dense, input).first);
}
BENCHMARK(BM_DenseForward)->Arg(8192)->Arg(32768);

void BM_ModelForwardBackward(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Model model = build_model(ModelConfig::default_config(side), 7);
  const Tensor input = random_input({kInputChannels, side, side}, 6);
  std::vector<Tensor> grads;
  for (auto _ : state) {
    Model::Trace trace;
    const Tensor logits = model.forward(input, trace);
    model.backward(trace, Tensor(logits.shape(), 1.0f), grads);
    benchmark::DoNotOptimize(grads.data());
  }
}
BENCHMARK(BM_ModelForwardBackward)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Preprocess(benchmark::State& state) {
  const Image img = synth_render(0, 7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(preprocess_image(img, 128, {}));
}
BENCHMARK(BM_Preprocess)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace shrimpcnn

BENCHMARK_MAIN();
