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

#include "framelstm/metrics.h"

#include <algorithm>
#include <functional>

#include <set>
#include <stdexcept>

namespace framelstm {

SpanCounts &SpanCounts::operator+=(const SpanCounts &other) {
  matched += other.matched;
  predicted += other.predicted;
  gold += other.gold;
  return *this;
}

PrfScore SpanCounts::Score() const {
  if (predicted == 0 && gold == 0) return {1.0, 1.0, 1.0};
  PrfScore s;
  s.precision = predicted == 0 ? 0.0
                               : static_cast<double>(matched) /
                                     static_cast<double>(predicted);
  s.recall = gold == 0 ? 0.0
                       : static_cast<double>(matched) /
                             static_cast<double>(gold);
  const double sum = s.precision + s.recall;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

SpanCounts CountSpans(std::span<const FrameElement> gold,
                      std::span<const FrameElement> predicted) {
  const std::set<FrameElement> g(gold.begin(), gold.end());
  const std::set<FrameElement> p(predicted.begin(), predicted.end());
  SpanCounts counts;
  counts.gold = g.size();
  counts.predicted = p.size();
  for (const auto &e : p) counts.matched += g.count(e);
  return counts;
}

PrfScore SpanF1(std::span<const FrameElement> gold,
                std::span<const FrameElement> predicted) {
  return CountSpans(gold, predicted).Score();
}

void CheckPoolNesting(const StageEvaluation &eval, std::size_t test_size) {
  auto strictly_sorted = [](const std::vector<std::size_t> &v) {
    return std::adjacent_find(v.begin(), v.end(),
                              std::greater_equal<>()) == v.end();
  };
  const auto &ai = eval.ai_pool;
  const auto &ac = eval.ac_pool;
  if (!strictly_sorted(ai) || !strictly_sorted(ac) ||
      (!ai.empty() && ai.back() >= test_size) ||
      !std::includes(ai.begin(), ai.end(), ac.begin(), ac.end())) {
    throw std::logic_error("evaluation pools are not nested");
  }
}

StageEvaluation EvaluatePredictions(std::span<const ParsedCommand> predictions,
                                    std::span<const AnnotatedSentence> test) {
  if (predictions.size() != test.size()) {
    throw std::invalid_argument("prediction count does not match test set");
  }
  StageEvaluation eval;
  eval.predictions.assign(predictions.begin(), predictions.end());
  SpanCounts ai, ac;
  std::size_t frames_correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto &gold = test[i];
    const auto &pred = predictions[i];
    if (pred.frame_type != gold.frame.frame_type) continue;
    ++frames_correct;
    eval.ai_pool.push_back(i);

    const auto gold_untyped = Untyped(gold.frame.elements);
    const auto pred_untyped = Untyped(pred.elements);
    const SpanCounts spans = CountSpans(gold_untyped, pred_untyped);
    ai += spans;
    if (spans.matched == spans.gold && spans.matched == spans.predicted) {
      eval.ac_pool.push_back(i);
      ac += CountSpans(gold.frame.elements, pred.elements);
    }
  }
  auto &m = eval.metrics;
  m.ad_support = test.size();
  m.ai_support = eval.ai_pool.size();
  m.ac_support = eval.ac_pool.size();
  m.ad_f1 = test.empty() ? 0.0
                         : static_cast<double>(frames_correct) /
                               static_cast<double>(test.size());
  if (!eval.ai_pool.empty()) m.ai_f1 = ai.Score().f1;
  if (!eval.ac_pool.empty()) m.ac_f1 = ac.Score().f1;
  CheckPoolNesting(eval, test.size());
  return eval;
}

StageEvaluation EvaluateStagewise(const CommandParser &parser,
                                  std::span<const AnnotatedSentence> test) {
  std::vector<ParsedCommand> predictions;
  predictions.reserve(test.size());
  for (const auto &s : test) predictions.push_back(parser.Parse(s.tokens));
  return EvaluatePredictions(predictions, test);
}

}  // namespace framelstm
