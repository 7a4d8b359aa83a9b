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

#ifndef FRAMELSTM_METRICS_H_
#define FRAMELSTM_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/parsed_command.h"

namespace framelstm {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact-boundary, exact-type match counts over span sets (duplicates
// collapse).
struct SpanCounts {
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  SpanCounts &operator+=(const SpanCounts &other);
  // Empty prediction and empty gold score 1/1/1; P + R = 0 gives F1 = 0.
  PrfScore Score() const;
};

SpanCounts CountSpans(std::span<const FrameElement> gold,
                      std::span<const FrameElement> predicted);
PrfScore SpanF1(std::span<const FrameElement> gold,
                std::span<const FrameElement> predicted);

// Stage-conditional scores. AI is scored only on sentences whose frame was
// predicted correctly; AC only on those that additionally got every span
// boundary right. An empty pool leaves the score unset ("n/a").
struct StageMetrics {
  double ad_f1 = 0.0;
  std::optional<double> ai_f1;
  std::optional<double> ac_f1;
  std::size_t ad_support = 0;  // sentences
  std::size_t ai_support = 0;
  std::size_t ac_support = 0;
};

struct StageEvaluation {
  StageMetrics metrics;
  std::vector<ParsedCommand> predictions;
  std::vector<std::size_t> ai_pool;  // indices into the test set
  std::vector<std::size_t> ac_pool;
};

// Throws std::logic_error unless ac_pool is a subset of ai_pool and ai_pool a
// subset of [0, test_size), both sorted and duplicate-free.
void CheckPoolNesting(const StageEvaluation &eval, std::size_t test_size);

StageEvaluation EvaluatePredictions(std::span<const ParsedCommand> predictions,
                                    std::span<const AnnotatedSentence> test);
StageEvaluation EvaluateStagewise(const CommandParser &parser,
                                  std::span<const AnnotatedSentence> test);

}  // namespace framelstm

#endif  // FRAMELSTM_METRICS_H_
