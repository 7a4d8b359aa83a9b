// Copyright 2026 The framelstm Authors.
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
#include "framelstm/random.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

namespace framelstm {
namespace {

TEST(MixSeedTest, DependsOnSeedAndName) {
  EXPECT_EQ(MixSeed(1, "a"), MixSeed(1, "a"));
  EXPECT_NE(MixSeed(1, "a"), MixSeed(2, "a"));
  EXPECT_NE(MixSeed(1, "a"), MixSeed(1, "b"));
}

TEST(UniformTest, StaysInRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = UniformUnit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double r = UniformReal(rng, -2.0, 5.0);
    ASSERT_GE(r, -2.0);
    ASSERT_LT(r, 5.0);
    ASSERT_LT(UniformIndex(rng, 7), 7u);
  }
}

TEST(UniformTest, IndexCoversAllValuesRoughlyEvenly) {
  Rng rng(11);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[UniformIndex(rng, 5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(ShuffleTest, IsSeededPermutation) {
  std::vector<int> a(20), b(20);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Rng r1(5), r2(5);
  Shuffle(a, r1);
  Shuffle(b, r2);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(20);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(sorted, expected);
}

}  // namespace
}  // namespace framelstm
