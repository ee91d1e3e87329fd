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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "shrimpcnn/rng.hpp"
#include "shrimpcnn/tensor.hpp"

namespace shrimpcnn {
namespace {

TEST(Pcg32, MatchesReferenceSequence) {
  // First outputs of the reference pcg32 demo for seed 42, stream 54.
  Pcg32 rng(42, 54);
  const std::uint32_t expected[] = {0xa15c02b7, 0x7b47f409, 0xba1d3330, 0x83d2f293, 0xbfa4784b, 0xcbed606e};
  for (std::uint32_t e : expected) EXPECT_EQ(rng.next_u32(), e);
}

TEST(Pcg32, StreamsAreIndependent) {
  Pcg32 a(7, 1), b(7, 2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next_u32() == b.next_u32();
  EXPECT_LT(same, 3);
}

TEST(Pcg32, BelowStaysInRangeAndCoversIt) {
  Pcg32 rng(3);
  std::vector<int> hits(7);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7U);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Pcg32, UniformInUnitInterval) {
  Pcg32 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Pcg32, NormalMoments) {
  Pcg32 rng(5);
  const int n = 20000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.03);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Pcg32, ShuffleIsPermutationAndDeterministic) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Pcg32 r1(9), r2(9);
  r1.shuffle(std::span<int>(a));
  r2.shuffle(std::span<int>(b));
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(TensorCreate, ZerosAndConstantFill) {
  const Tensor z = tensor_create<float>({2, 2});
  EXPECT_EQ(z.shape(), (Shape{2, 2}));
  for (float v : z.values()) EXPECT_EQ(v, 0.0f);
  const TensorD c = tensor_create<double>({3}, 1.5);
  EXPECT_EQ(c.values().size(), 3U);
  for (double v : c.values()) EXPECT_EQ(v, 1.5);
}

TEST(TensorCreate, RejectsZeroOrMissingDimension) {
  EXPECT_THROW(tensor_create<double>({2, 0}), ShapeError);
  EXPECT_THROW(tensor_create<double>({}), ShapeError);
}

TEST(Tensor, DataLengthMustMatchShape) {
  EXPECT_THROW(TensorD({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(Tensor, ReshapeKeepsDataAndChecksCount) {
  const TensorD t({2, 3}, {1, 2, 3, 4, 5, 6});
  const TensorD r = t.reshaped({3, 2});
  EXPECT_EQ(r.shape(), (Shape{3, 2}));
  EXPECT_EQ(r.at(2, 1), 6.0);
  EXPECT_EQ(t.shape(), (Shape{2, 3}));
  EXPECT_THROW((void)t.reshaped({4}), ShapeError);
}

TEST(TensorRandomInit, DeterministicPerSeed) {
  Pcg32 a(123, streams::kInit), b(123, streams::kInit);
  EXPECT_EQ(tensor_random_init<double>({4, 5}, 20, a), tensor_random_init<double>({4, 5}, 20, b));
}

TEST(TensorRandomInit, HeVarianceStatistics) {
  // Shape [1000], fan_in 2: variance 2/2 = 1.
  for (std::uint64_t seed : {1ULL, 7ULL, 2024ULL}) {
    Pcg32 rng(seed, streams::kInit);
    const TensorD t = tensor_random_init<double>({1000}, 2, rng);
    double mean = 0;
    for (double v : t.values()) mean += v;
    mean /= 1000.0;
    double var = 0;
    for (double v : t.values()) var += (v - mean) * (v - mean);
    var /= 999.0;
    EXPECT_LT(std::abs(mean), 0.15) << "seed " << seed;
    EXPECT_NEAR(var, 1.0, 0.25) << "seed " << seed;
  }
}

TEST(TensorRandomInit, RejectsZeroFanIn) {
  Pcg32 rng(1);
  EXPECT_THROW(tensor_random_init<double>({3}, 0, rng), ParameterError);
}

TEST(Matmul, IdentityAndHandArithmetic) {
  const TensorD id({2, 2}, {1, 0, 0, 1});
  const TensorD m({2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(matmul(id, m), m);
  const TensorD r = matmul(TensorD({1, 2}, {1, 2}), TensorD({2, 1}, {3, 4}));
  EXPECT_EQ(r.shape(), (Shape{1, 1}));
  EXPECT_EQ(r[0], 11.0);
}

TEST(Matmul, RejectsMismatchedInnerDimensions) {
  EXPECT_THROW(matmul(TensorD({2, 3}), TensorD({2, 3})), ShapeError);
}

TEST(Matmul, AssociativeOnRandomMatrices) {
  Pcg32 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    TensorD a({4, 4}), b({4, 4}), c({4, 4});
    for (auto* t : {&a, &b, &c}) {
      for (double& v : t->values()) v = rng.uniform(-2, 2);
    }
    const TensorD left = matmul(matmul(a, b), c);
    const TensorD right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      const double scale = std::max({std::abs(left[i]), std::abs(right[i]), 1e-12});
      EXPECT_LT(std::abs(left[i] - right[i]) / scale, 1e-9);
    }
  }
}

TEST(ReduceArgmax, StrictMaxAndLowestIndexTies) {
  EXPECT_EQ(reduce_argmax(TensorD({2}, {0.2, 0.8})), 1U);
  EXPECT_EQ(reduce_argmax(TensorD({2}, {0.5, 0.5})), 0U);
  EXPECT_EQ(reduce_argmax(TensorD({3}, {3, 1, 3})), 0U);
}

TEST(ReduceArgmax, RejectsEmpty) {
  EXPECT_THROW(reduce_argmax(std::span<const double>()), ShapeError);
}

TEST(ReduceArgmax, InvariantUnderConstantShift) {
  Pcg32 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    TensorD t({1 + rng.below(10)});
    for (double& v : t.values()) v = static_cast<double>(rng.below(5));  // frequent ties
    TensorD shifted = t;
    const double c = rng.uniform(-100, 100);
    for (double& v : shifted.values()) v += c;
    EXPECT_EQ(reduce_argmax(t), reduce_argmax(shifted));
  }
}

}  // namespace
}  // namespace shrimpcnn
