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

#include "framelstm/model.h"

#include <map>
#include <stdexcept>

#include "framelstm/neural/functional.h"
#include "framelstm/neural/layers.h"

namespace framelstm {

using neural::Tape;
using neural::Var;

std::string ModelConfig::Name() const {
  return std::string(variant == Variant::k2L ? "2L" : "3L") +
         (attention ? "-ATT" : "-NO-ATT");
}

void ModelConfig::Validate() const {
  auto positive = [](int v, const char *name) {
    if (v < 1) {
      throw std::invalid_argument(std::string(name) + " must be at least 1");
    }
  };
  positive(embedding_dim, "embedding_dim");
  positive(hidden_size, "hidden_size");
  positive(decoder_hidden, "decoder_hidden");
  positive(attention_size, "attention_size");
  positive(label_embedding_dim, "label_embedding_dim");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("dropout must lie in [0, 1)");
  }
}

GoldLabels MakeGoldLabels(const AnnotatedSentence &sentence,
                          const LabelVocab &vocab, Variant variant) {
  GoldLabels gold;
  gold.frame = vocab.FrameIndex(sentence.frame.frame_type);
  if (gold.frame < 0) {
    throw std::invalid_argument("frame '" + sentence.frame.frame_type +
                                "' not in vocabulary");
  }
  const bool typed = variant == Variant::k2L;
  auto labels =
      EncodeIob(sentence, typed ? IobScheme::kTyped : IobScheme::kPlain);
  for (const auto &label : labels.labels) {
    int index = typed ? vocab.TypedIobIndex(label) : vocab.IobIndex(label);
    if (index < 0) {
      throw std::invalid_argument("label '" + label + "' not in vocabulary");
    }
    gold.ai.push_back(index);
  }
  if (!typed) {
    gold.ac.assign(sentence.tokens.size(), 0);
    for (const auto &e : sentence.frame.elements) {
      int index = vocab.AcIndex(e.type);
      if (index < 0) {
        throw std::invalid_argument("element type '" + e.type +
                                    "' not in vocabulary");
      }
      for (int t = e.span.start; t <= e.span.end; ++t) gold.ac[t] = index;
    }
  }
  return gold;
}

Eigen::Index Argmax(const Eigen::Ref<const Eigen::VectorXd> &values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ModelOutput ForwardGraph::ToOutput() const {
  ModelOutput out;
  out.ad_logits = ad_logits.value().col(0);
  const Eigen::Index T = static_cast<Eigen::Index>(ai_logits.size());
  out.ai_logits.resize(T, ai_logits.front().rows());
  for (Eigen::Index t = 0; t < T; ++t) {
    out.ai_logits.row(t) = ai_logits[t].value().col(0).transpose();
  }
  if (!ac_logits.empty()) {
    Eigen::MatrixXd ac(T, ac_logits.front().rows());
    for (Eigen::Index t = 0; t < T; ++t) {
      ac.row(t) = ac_logits[t].value().col(0).transpose();
    }
    out.ac_logits = std::move(ac);
  }
  for (const auto &[layer, rows] : attention) {
    AttentionMap map;
    map.layer = layer;
    map.weights.resize(static_cast<Eigen::Index>(rows.size()),
                       rows.front().cols());
    for (std::size_t q = 0; q < rows.size(); ++q) {
      map.weights.row(q) = rows[q].value().row(0);
    }
    out.attention_maps.push_back(std::move(map));
  }
  return out;
}

Model::Model(const ModelConfig &config, const LabelVocab &vocab)
    : config_(config), vocab_(vocab) {
  config_.Validate();
  if (vocab_.frames.empty()) {
    throw std::invalid_argument("label vocabulary has no frames");
  }
  const int d = config_.embedding_dim;
  const int h = config_.hidden_size;
  const int encoded = 2 * h;
  const int dec = config_.decoder_hidden;
  const int le = config_.label_embedding_dim;
  const int att = config_.attention_size;
  const uint64_t seed = config_.seed;
  const auto n_ai = static_cast<Eigen::Index>(ai_labels().size());

  neural::AddLstmCellParams(params_, "layer1.fwd", d, h, seed);
  neural::AddLstmCellParams(params_, "layer1.bwd", d, h, seed);
  if (config_.attention) {
    neural::AddAttentionParams(params_, "ad.attention", encoded, encoded, att,
                               seed);
  }
  neural::AddAffineParams(params_, "ad.output", encoded,
                          static_cast<Eigen::Index>(vocab_.frames.size()),
                          seed);

  // Last column of the label embedding is the begin-of-sequence label.
  params_.Add("layer2.label_embedding", le, n_ai + 1, seed,
              neural::InitScheme::kGlorotUniform);
  if (config_.attention) {
    neural::AddAttentionParams(params_, "layer2.attention", encoded, encoded,
                               att, seed);
  }
  const int layer2_input = encoded + (config_.attention ? encoded : 0) + le;
  neural::AddLstmCellParams(params_, "layer2.lstm", layer2_input, dec, seed);
  neural::AddAffineParams(params_, "layer2.output", dec, n_ai, seed);

  if (config_.variant == Variant::k3L) {
    neural::AddHighwayParams(params_, "layer3.highway", encoded, seed);
    params_.Add("layer3.label_embedding", le,
                static_cast<Eigen::Index>(vocab_.iob.size()), seed,
                neural::InitScheme::kGlorotUniform);
    if (config_.attention) {
      neural::AddAttentionParams(params_, "layer3.attention", encoded,
                                 encoded, att, seed);
    }
    const int layer3_input = encoded + (config_.attention ? encoded : 0) + le;
    neural::AddLstmCellParams(params_, "layer3.lstm", layer3_input, dec, seed);
    neural::AddAffineParams(params_, "layer3.output", dec,
                            static_cast<Eigen::Index>(vocab_.ac_labels.size()),
                            seed);
  }
}

const std::vector<std::string> &Model::ai_labels() const {
  return config_.variant == Variant::k2L ? vocab_.typed_iob : vocab_.iob;
}

namespace {

// Inverted dropout on a column vector.
Var Dropout(Tape &tape, Var x, double rate, Rng *rng) {
  if (!rng || rate <= 0.0) return x;
  Eigen::MatrixXd mask(x.rows(), x.cols());
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = UniformUnit(*rng) < keep ? 1.0 / keep : 0.0;
  }
  return neural::Hadamard(x, tape.Constant(std::move(mask)));
}

}  // namespace

ForwardGraph Model::Forward(Tape &tape, const Eigen::MatrixXd &embedded,
                            const GoldLabels *gold, Mode mode,
                            Rng *dropout_rng) const {
  if (embedded.cols() != config_.embedding_dim) {
    throw neural::DimensionError(
        "embedding width " + std::to_string(embedded.cols()) +
        " does not match model embedding_dim " +
        std::to_string(config_.embedding_dim));
  }
  std::vector<Var> columns;
  columns.reserve(embedded.rows());
  for (Eigen::Index t = 0; t < embedded.rows(); ++t) {
    columns.push_back(tape.Constant(embedded.row(t).transpose()));
  }
  return Forward(tape, std::move(columns), gold, mode, dropout_rng);
}

ForwardGraph Model::Forward(Tape &tape, std::vector<Var> columns,
                            const GoldLabels *gold, Mode mode,
                            Rng *dropout_rng) const {
  const Eigen::Index T = static_cast<Eigen::Index>(columns.size());
  if (T < 1) throw std::invalid_argument("forward on an empty sentence");
  for (const Var &x : columns) {
    if (x.rows() != config_.embedding_dim || x.cols() != 1) {
      throw neural::DimensionError("input column is " +
                                   std::to_string(x.rows()) + "x" +
                                   std::to_string(x.cols()) +
                                   "; model embedding_dim is " +
                                   std::to_string(config_.embedding_dim));
    }
  }
  const bool train = mode == Mode::kTrain;
  const bool three_layer = config_.variant == Variant::k3L;
  if (train) {
    if (!gold) throw std::invalid_argument("train mode requires gold labels");
    if (static_cast<Eigen::Index>(gold->ai.size()) != T ||
        (three_layer && static_cast<Eigen::Index>(gold->ac.size()) != T)) {
      throw std::invalid_argument("gold label length does not match tokens");
    }
  }
  Rng *rng = train ? dropout_rng : nullptr;
  const double rate = config_.dropout;
  ForwardGraph graph;

  // Layer 1: BiLSTM over embeddings.
  std::vector<Var> inputs;
  inputs.reserve(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    inputs.push_back(Dropout(tape, columns[t], rate, rng));
  }
  auto fwd = neural::LstmSequence(
      neural::BindLstmCell(tape, params_, "layer1.fwd"), inputs, false);
  auto bwd = neural::LstmSequence(
      neural::BindLstmCell(tape, params_, "layer1.bwd"), inputs, true);
  std::vector<Var> encoded(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    encoded[t] = neural::ConcatRows({fwd[t], bwd[t]});
  }
  Var keys = neural::ConcatCols(encoded);
  Var final_state = neural::ConcatRows({fwd[T - 1], bwd[0]});

  // AD head.
  Var sentence = final_state;
  if (config_.attention) {
    auto att = neural::BindAttention(tape, params_, "ad.attention");
    auto pooled = neural::Attend(att, final_state, keys,
                                 neural::ProjectKeys(att, keys));
    sentence = pooled.context;
    graph.attention.push_back({"ad", {pooled.weights}});
  }
  graph.ad_logits =
      neural::Affine(neural::BindAffine(tape, params_, "ad.output"), sentence);

  std::vector<Var> dropped(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    dropped[t] = Dropout(tape, encoded[t], rate, rng);
  }

  // Layer 2: decoder with previous-label embeddings.
  {
    Var labels = tape.Param(params_.Get("layer2.label_embedding"));
    const Eigen::Index bos = labels.cols() - 1;
    auto cell = neural::BindLstmCell(tape, params_, "layer2.lstm");
    auto output = neural::BindAffine(tape, params_, "layer2.output");
    neural::AttentionVars att;
    Var projected;
    std::vector<Var> weights;
    if (config_.attention) {
      att = neural::BindAttention(tape, params_, "layer2.attention");
      projected = neural::ProjectKeys(att, keys);
    }
    auto state = neural::ZeroLstmState(tape, cell.hidden_size);
    Eigen::Index previous = bos;
    for (Eigen::Index t = 0; t < T; ++t) {
      std::vector<Var> parts{dropped[t]};
      if (config_.attention) {
        auto r = neural::Attend(att, encoded[t], keys, projected);
        parts.push_back(r.context);
        weights.push_back(r.weights);
      }
      parts.push_back(neural::Column(labels, previous));
      state = neural::LstmCell(cell, neural::ConcatRows(parts), state);
      Var logits = neural::Affine(output, state.h);
      graph.ai_logits.push_back(logits);
      previous = train ? gold->ai[t] : Argmax(logits.value().col(0));
    }
    if (config_.attention) graph.attention.push_back({"layer2", weights});
  }

  // Layer 3: element typing over highway-carried layer-1 states.
  if (three_layer) {
    auto highway = neural::BindHighway(tape, params_, "layer3.highway");
    std::vector<Var> carried(T);
    for (Eigen::Index t = 0; t < T; ++t) {
      carried[t] = neural::Highway(highway, dropped[t]);
    }
    Var labels = tape.Param(params_.Get("layer3.label_embedding"));
    auto cell = neural::BindLstmCell(tape, params_, "layer3.lstm");
    auto output = neural::BindAffine(tape, params_, "layer3.output");
    neural::AttentionVars att;
    Var carried_keys, projected;
    std::vector<Var> weights;
    if (config_.attention) {
      att = neural::BindAttention(tape, params_, "layer3.attention");
      carried_keys = neural::ConcatCols(carried);
      projected = neural::ProjectKeys(att, carried_keys);
    }
    auto state = neural::ZeroLstmState(tape, cell.hidden_size);
    for (Eigen::Index t = 0; t < T; ++t) {
      std::vector<Var> parts{carried[t]};
      if (config_.attention) {
        auto r = neural::Attend(att, carried[t], carried_keys, projected);
        parts.push_back(r.context);
        weights.push_back(r.weights);
      }
      const Eigen::Index iob =
          train ? gold->ai[t] : Argmax(graph.ai_logits[t].value().col(0));
      parts.push_back(neural::Column(labels, iob));
      state = neural::LstmCell(cell, neural::ConcatRows(parts), state);
      graph.ac_logits.push_back(neural::Affine(output, state.h));
    }
    if (config_.attention) graph.attention.push_back({"layer3", weights});
  }
  return graph;
}

ModelOutput Model::Run(const Eigen::MatrixXd &embedded, Mode mode,
                       const GoldLabels *gold) const {
  Tape tape;
  return Forward(tape, embedded, gold, mode).ToOutput();
}

namespace {

void CheckGoldLength(std::size_t tokens, const GoldLabels &gold, bool has_ac) {
  if (gold.ai.size() != tokens || (has_ac && gold.ac.size() != tokens)) {
    throw std::invalid_argument("gold label length does not match tokens");
  }
}

}  // namespace

Var JointLoss(const ForwardGraph &graph, const GoldLabels &gold) {
  const bool has_ac = !graph.ac_logits.empty();
  CheckGoldLength(graph.ai_logits.size(), gold, has_ac);
  const double inv_t = 1.0 / static_cast<double>(graph.ai_logits.size());
  std::vector<Var> terms{
      neural::SoftmaxCrossEntropy(graph.ad_logits, gold.frame)};
  std::vector<Var> ai;
  for (std::size_t t = 0; t < graph.ai_logits.size(); ++t) {
    ai.push_back(neural::SoftmaxCrossEntropy(graph.ai_logits[t], gold.ai[t]));
  }
  terms.push_back(neural::Scale(neural::Sum(ai), inv_t));
  if (has_ac) {
    std::vector<Var> ac;
    for (std::size_t t = 0; t < graph.ac_logits.size(); ++t) {
      ac.push_back(
          neural::SoftmaxCrossEntropy(graph.ac_logits[t], gold.ac[t]));
    }
    terms.push_back(neural::Scale(neural::Sum(ac), inv_t));
  }
  return neural::Sum(terms);
}

double JointLoss(const ModelOutput &output, const GoldLabels &gold) {
  using neural::CrossEntropy;
  using neural::Softmax;
  const Eigen::Index T = output.ai_logits.rows();
  CheckGoldLength(static_cast<std::size_t>(T), gold,
                  output.ac_logits.has_value());
  double loss = CrossEntropy<double>(Softmax<double>(output.ad_logits),
                                     gold.frame);
  double ai = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    ai += CrossEntropy<double>(
        Softmax<double>(output.ai_logits.row(t).transpose()), gold.ai[t]);
  }
  loss += ai / static_cast<double>(T);
  if (output.ac_logits) {
    double ac = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
      ac += CrossEntropy<double>(
          Softmax<double>(output.ac_logits->row(t).transpose()), gold.ac[t]);
    }
    loss += ac / static_cast<double>(T);
  }
  return loss;
}

ParsedCommand DecodeOutput(const ModelOutput &output, const LabelVocab &vocab,
                           Variant variant) {
  ParsedCommand command;
  command.frame_type = vocab.frames.at(Argmax(output.ad_logits));

  const bool typed = variant == Variant::k2L;
  const auto &alphabet = typed ? vocab.typed_iob : vocab.iob;
  LabelSequence labels;
  labels.scheme = typed ? IobScheme::kTyped : IobScheme::kPlain;
  for (Eigen::Index t = 0; t < output.ai_logits.rows(); ++t) {
    labels.labels.push_back(
        alphabet.at(Argmax(output.ai_logits.row(t).transpose())));
  }
  auto spans = DecodeIob(labels);
  if (typed) {
    command.elements = std::move(spans);
    return command;
  }

  if (!output.ac_logits) {
    throw std::invalid_argument("3L output without element-type logits");
  }
  const auto &ac = *output.ac_logits;
  for (auto &span : spans) {
    std::vector<int> votes(vocab.ac_labels.size(), 0);
    for (int t = span.span.start; t <= span.span.end; ++t) {
      ++votes[Argmax(ac.row(t).transpose())];
    }
    int best = -1;
    for (std::size_t k = 1; k < votes.size(); ++k) {
      if (votes[k] > 0 && (best < 0 || votes[k] > votes[best])) {
        best = static_cast<int>(k);
      }
    }
    if (best < 0) continue;  // unanimous O
    span.type = vocab.ac_labels[best];
    command.elements.push_back(std::move(span));
  }
  return command;
}

ParsedCommand Predict(const Model &model, const EmbeddingTable &table,
                      std::span<const std::string> tokens) {
  auto output = model.Run(EmbedSentence(table, tokens));
  return DecodeOutput(output, model.vocab(), model.config().variant);
}

ParsedCommand NeuralParser::Parse(const std::vector<std::string> &tokens) const {
  return Predict(model_, table_, tokens);
}

ModelOutput NeuralParser::Run(const std::vector<std::string> &tokens) const {
  return model_.Run(EmbedSentence(table_, tokens));
}

}  // namespace framelstm
