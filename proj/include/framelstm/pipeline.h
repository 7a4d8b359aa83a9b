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

#ifndef FRAMELSTM_PIPELINE_H_
#define FRAMELSTM_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/embeddings.h"
#include "framelstm/grounding.h"
#include "framelstm/metrics.h"
#include "framelstm/model.h"
#include "framelstm/neural/grad_check.h"
#include "framelstm/neural/optimizer.h"
#include "json.hpp"

namespace framelstm {

enum class OptimizerKind { kAdam, kSgd };

struct TrainConfig {
  int epochs = 60;
  int batch_size = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  neural::AdamOptions adam;
  // Global gradient-norm clip per update; 0 disables.
  double clip_norm = 5.0;
  // Epochs without held-out improvement before stopping; 0 disables early
  // stopping and the held-out split.
  int patience = 0;
  uint64_t seed = 42;
  int folds = 5;
  // Fine-tune the vectors of tokens seen in training; the unknown vector
  // stays fixed.
  bool train_embeddings = false;

  // Throws std::invalid_argument.
  void Validate() const;
};

inline constexpr double kHeldOutFraction = 0.1;

struct TrainResult {
  std::vector<double> loss_history;     // mean training loss per epoch
  std::vector<double> heldout_history;  // empty without early stopping
  int best_epoch = -1;                  // 0-based; -1 without early stopping
  bool stopped_early = false;
};

// Per-sentence gradients, averaged over batches of batch_size. Sentences are
// reshuffled every epoch from the seeded generator. With patience > 0, 10% of
// the sentences (seeded) are held out and the best held-out parameters are
// restored when training stops.
// With config.train_embeddings the table is updated in place and marked
// trainable; the const overload rejects that setting.
TrainResult Train(Model &model, EmbeddingTable &table,
                  std::span<const AnnotatedSentence> train,
                  const TrainConfig &config);
TrainResult Train(Model &model, const EmbeddingTable &table,
                  std::span<const AnnotatedSentence> train,
                  const TrainConfig &config);

// Seed for the hashed fallback embeddings used when no table is supplied.
inline constexpr uint64_t kHashedEmbeddingSeed = 17;

// Hashed embeddings over the distinct tokens of `corpus`.
EmbeddingTable CorpusEmbeddings(std::span<const AnnotatedSentence> corpus,
                                int dim);

// Gradient check of the teacher-forced joint loss on one sentence, without
// dropout. Central differences are taken on the extended-precision reference
// forward pass.
neural::GradCheckResult CheckModelGradients(
    Model &model, const EmbeddingTable &table,
    const AnnotatedSentence &sentence,
    const neural::GradCheckOptions &options = {});

// Teacher-forced joint loss, averaged over sentences, no dropout.
double MeanLoss(const Model &model, const EmbeddingTable &table,
                std::span<const AnnotatedSentence> sentences);

// Throws std::logic_error when chain accuracy exceeds frame accuracy, which a
// correct evaluation cannot produce.
void CheckChainBound(const StageMetrics &stage, const ChainMetrics &chain);

struct FoldResult {
  int fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  StageMetrics stage;
  std::optional<ChainMetrics> chain;
  std::size_t epochs_run = 0;
};

struct MeanMetrics {
  double ad_f1 = 0.0;
  std::optional<double> ai_f1;  // mean over folds where defined
  std::optional<double> ac_f1;
  std::optional<double> chain_accuracy;
};

struct CrossValidationResult {
  std::string name;
  ModelConfig model;
  std::vector<FoldResult> folds;
  MeanMetrics mean;
};

MeanMetrics MeanOverFolds(std::span<const FoldResult> folds);

// Trains and evaluates one fold. The label vocabulary comes from the whole
// corpus so every fold shares one output space.
FoldResult RunFold(std::span<const AnnotatedSentence> corpus,
                   const FoldAssignment &folds, int fold,
                   const MapIndex *maps, const EmbeddingTable &table,
                   const ModelConfig &model_config,
                   const TrainConfig &train_config);

// k-fold cross-validation with k = train_config.folds. Fold i trains with
// seeds (model seed + i, train seed + i). Folds run on up to `jobs` threads;
// results do not depend on scheduling. The chain column is computed when
// `maps` is given and every sentence carries gold groundings.
CrossValidationResult CrossValidate(std::span<const AnnotatedSentence> corpus,
                                    const MapIndex *maps,
                                    const EmbeddingTable &table,
                                    const ModelConfig &model_config,
                                    const TrainConfig &train_config,
                                    int jobs = 1);

// One row of the results table.
struct ReportRow {
  std::string name;
  double ad_f1 = 0.0;
  std::optional<double> ai_f1;
  std::optional<double> ac_f1;
  std::optional<double> chain_accuracy;
};

ReportRow RowFrom(const CrossValidationResult &result);
ReportRow RowFrom(const std::string &name, const StageMetrics &stage,
                  const std::optional<ChainMetrics> &chain);

// Columns AD, AI, AC, Whole Chain as percentages with two decimals; unset
// values render as "n/a".
std::string RenderReport(std::span<const ReportRow> rows);

nlohmann::ordered_json CrossValidationJson(const CrossValidationResult &r);
nlohmann::ordered_json EvaluationJson(const std::string &name,
                                      const StageMetrics &stage,
                                      const std::optional<ChainMetrics> &chain);

}  // namespace framelstm

#endif  // FRAMELSTM_PIPELINE_H_
