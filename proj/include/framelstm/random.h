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

#ifndef FRAMELSTM_RANDOM_H_
#define FRAMELSTM_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace framelstm {

// The engine output sequence is fixed by the standard. The helpers below avoid
// the std distributions, whose outputs are implementation-defined, so seeded
// runs produce identical bytes across standard libraries.
using Rng = std::mt19937_64;

// Derives a child seed from a parent seed and a name (FNV-1a + splitmix).
uint64_t MixSeed(uint64_t seed, std::string_view name);

// Uniform in [0, 1) with 53 random bits.
double UniformUnit(Rng &rng);

// Uniform in [lo, hi).
inline double UniformReal(Rng &rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

// Uniform index in [0, n). n must be positive.
std::size_t UniformIndex(Rng &rng, std::size_t n);

// Fisher-Yates shuffle driven by UniformIndex.
template <typename T>
void Shuffle(std::vector<T> &items, Rng &rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = UniformIndex(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace framelstm

#endif  // FRAMELSTM_RANDOM_H_
