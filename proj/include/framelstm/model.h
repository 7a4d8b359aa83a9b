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

#ifndef FRAMELSTM_MODEL_H_
#define FRAMELSTM_MODEL_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/embeddings.h"
#include "framelstm/neural/autodiff.h"
#include "framelstm/neural/parameters.h"
#include "framelstm/parsed_command.h"
#include "framelstm/random.h"

namespace framelstm {

// 2L: BiLSTM (AD) + label-dependency decoder emitting typed IOB (AI and AC
// jointly). 3L: the decoder emits plain IOB and a third LSTM over
// highway-transformed layer-1 states types each token.
enum class Variant { k2L, k3L };

struct ModelConfig {
  Variant variant = Variant::k3L;
  bool attention = true;
  int embedding_dim = 50;
  int hidden_size = 16;  // per direction, layer 1
  int decoder_hidden = 16;
  int attention_size = 16;
  int label_embedding_dim = 8;
  double dropout = 0.3;
  uint64_t seed = 42;

  // "3L-ATT", "2L-NO-ATT", ...
  std::string Name() const;
  // Throws std::invalid_argument.
  void Validate() const;

  bool operator==(const ModelConfig &) const = default;
};

enum class Mode { kTrain, kInfer };

// Gold indices into the head label spaces.
struct GoldLabels {
  int frame = 0;
  std::vector<int> ai;  // layer-2 labels: iob (3L) or typed_iob (2L)
  std::vector<int> ac;  // layer-3 labels (3L only): ac_labels
};

GoldLabels MakeGoldLabels(const AnnotatedSentence &sentence,
                          const LabelVocab &vocab, Variant variant);

struct AttentionMap {
  std::string layer;        // "ad", "layer2", "layer3"
  Eigen::MatrixXd weights;  // queries x T, rows sum to 1
};

struct ModelOutput {
  Eigen::VectorXd ad_logits;                 // |frames|
  Eigen::MatrixXd ai_logits;                 // T x |layer-2 labels|
  std::optional<Eigen::MatrixXd> ac_logits;  // T x |ac_labels|, 3L only
  std::vector<AttentionMap> attention_maps;  // empty without attention
};

// Forward pass as recorded on a tape.
struct ForwardGraph {
  neural::Var ad_logits;
  std::vector<neural::Var> ai_logits;  // one column per token
  std::vector<neural::Var> ac_logits;
  std::vector<std::pair<std::string, std::vector<neural::Var>>> attention;

  ModelOutput ToOutput() const;
};

// Lowest index among maximal entries.
Eigen::Index Argmax(const Eigen::Ref<const Eigen::VectorXd> &values);

class Model {
 public:
  Model(const ModelConfig &config, const LabelVocab &vocab);

  const ModelConfig &config() const { return config_; }
  const LabelVocab &vocab() const { return vocab_; }
  neural::ParameterSet &params() { return params_; }
  const neural::ParameterSet &params() const { return params_; }

  // Label space of the layer-2 decoder.
  const std::vector<std::string> &ai_labels() const;

  // Records the forward pass. In train mode the decoder is teacher-forced
  // with `gold`, which must be given; in infer mode it feeds back its own
  // argmax. Dropout is applied only in train mode when `dropout_rng` is set.
  ForwardGraph Forward(neural::Tape &tape, const Eigen::MatrixXd &embedded,
                       const GoldLabels *gold, Mode mode,
                       Rng *dropout_rng = nullptr) const;
  // Same, with the embedded tokens already on the tape as d x 1 columns.
  ForwardGraph Forward(neural::Tape &tape, std::vector<neural::Var> columns,
                       const GoldLabels *gold, Mode mode,
                       Rng *dropout_rng = nullptr) const;

  ModelOutput Run(const Eigen::MatrixXd &embedded, Mode mode = Mode::kInfer,
                  const GoldLabels *gold = nullptr) const;

 private:
  ModelConfig config_;
  LabelVocab vocab_;
  neural::ParameterSet params_;
};

// 3L: H_AD + mean_t H_AI + mean_t H_AC. 2L: H_AD + mean_t H_joint.
neural::Var JointLoss(const ForwardGraph &graph, const GoldLabels &gold);
double JointLoss(const ModelOutput &output, const GoldLabels &gold);

// Turns head logits into a command: argmax frame; spans from the decoded
// layer-2 labels; 3L span types by majority vote of layer-3 token labels
// (O only wins when unanimous, which drops the span; ties go to the lowest
// index).
ParsedCommand DecodeOutput(const ModelOutput &output, const LabelVocab &vocab,
                           Variant variant);

ParsedCommand Predict(const Model &model, const EmbeddingTable &table,
                      std::span<const std::string> tokens);

class NeuralParser : public CommandParser {
 public:
  NeuralParser(const Model &model, const EmbeddingTable &table)
      : model_(model), table_(table) {}

  ParsedCommand Parse(const std::vector<std::string> &tokens) const override;
  ModelOutput Run(const std::vector<std::string> &tokens) const;

 private:
  const Model &model_;
  const EmbeddingTable &table_;
};

}  // namespace framelstm

#endif  // FRAMELSTM_MODEL_H_
