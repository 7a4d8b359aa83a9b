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

#ifndef FRAMELSTM_SYNTHETIC_H_
#define FRAMELSTM_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/grounding.h"

namespace framelstm {

// Template-grammar generator for small HuRIC-style corpora. Sentences are
// grounded against DemoMap().

// Motion, Bringing, Taking, Placing, Searching, Following.
std::vector<std::string> SyntheticFrames();

// The semantic map every synthetic sentence refers to ("house1").
SemanticMap DemoMap();

// Every token the grammar can emit, sorted.
std::vector<std::string> SyntheticVocabulary();

// Generates n sentences. The first min(n, |frames|) sentences cycle through
// `frames` in the given order so each requested frame appears; the rest pick
// frames uniformly. Throws std::invalid_argument for n < 1, an empty frame
// list, or a frame the grammar does not know.
Corpus GenerateSynthetic(uint64_t seed, int n,
                         std::span<const std::string> frames);

inline Corpus GenerateSynthetic(uint64_t seed, int n) {
  auto frames = SyntheticFrames();
  return GenerateSynthetic(seed, n, frames);
}

}  // namespace framelstm

#endif  // FRAMELSTM_SYNTHETIC_H_
