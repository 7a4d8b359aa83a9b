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

#ifndef FRAMELSTM_REFERENCE_MODEL_H_
#define FRAMELSTM_REFERENCE_MODEL_H_

// Tape-free forward pass of Model built from the functional layers, at any
// scalar precision. It reads the same parameter values and computes the same
// function as Model::Forward without dropout.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "framelstm/model.h"
#include "framelstm/neural/functional.h"
#include "framelstm/neural/parameters.h"

namespace framelstm {

template <typename Scalar>
struct ReferenceOutput {
  neural::Vector<Scalar> ad_logits;
  neural::Matrix<Scalar> ai_logits;  // T x labels
  std::optional<neural::Matrix<Scalar>> ac_logits;
};

namespace reference_internal {

template <typename Scalar>
neural::Matrix<Scalar> Value(const neural::ParameterSet &params,
                             const std::string &name) {
  return params.Get(name).value.template cast<Scalar>();
}

template <typename Scalar>
neural::LstmCellParams<Scalar> Lstm(const neural::ParameterSet &params,
                                    const std::string &prefix) {
  auto get = [&](const char *n) { return Value<Scalar>(params, prefix + "." + n); };
  neural::LstmCellParams<Scalar> p;
  p.W_i = get("W_i");
  p.W_f = get("W_f");
  p.W_o = get("W_o");
  p.W_g = get("W_g");
  p.U_i = get("U_i");
  p.U_f = get("U_f");
  p.U_o = get("U_o");
  p.U_g = get("U_g");
  p.b_i = get("b_i").col(0);
  p.b_f = get("b_f").col(0);
  p.b_o = get("b_o").col(0);
  p.b_g = get("b_g").col(0);
  return p;
}

template <typename Scalar>
neural::AttentionParams<Scalar> Attention(const neural::ParameterSet &params,
                                          const std::string &prefix) {
  return {Value<Scalar>(params, prefix + ".W_query"),
          Value<Scalar>(params, prefix + ".W_key"),
          Value<Scalar>(params, prefix + ".v").col(0)};
}

template <typename Scalar>
neural::Vector<Scalar> Affine(const neural::ParameterSet &params,
                              const std::string &prefix,
                              const neural::Vector<Scalar> &x) {
  return Value<Scalar>(params, prefix + ".W") * x +
         Value<Scalar>(params, prefix + ".b").col(0);
}

template <typename Scalar>
Eigen::Index ArgmaxOf(const neural::Vector<Scalar> &v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

template <typename Scalar>
neural::Vector<Scalar> Concat(
    const std::vector<neural::Vector<Scalar>> &parts) {
  Eigen::Index n = 0;
  for (const auto &p : parts) n += p.size();
  neural::Vector<Scalar> out(n);
  Eigen::Index at = 0;
  for (const auto &p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

// One decoder layer: LSTM over [inputs_t; context_t; label embedding]. The
// label fed at step t comes from `labels(t)`, which may read logits[0..t-1].
template <typename Scalar, typename LabelFn>
neural::Matrix<Scalar> Decode(const neural::ParameterSet &params,
                              const std::string &layer,
                              const neural::Matrix<Scalar> &inputs,
                              const std::optional<neural::Matrix<Scalar>> &ctx,
                              const neural::Matrix<Scalar> &label_embedding,
                              Eigen::Index n_out, LabelFn labels) {
  const Eigen::Index T = inputs.rows();
  const auto cell = Lstm<Scalar>(params, layer + ".lstm");
  neural::LstmState<Scalar> state{
      neural::Vector<Scalar>::Zero(cell.hidden_size()),
      neural::Vector<Scalar>::Zero(cell.hidden_size())};
  neural::Matrix<Scalar> logits(T, n_out);
  for (Eigen::Index t = 0; t < T; ++t) {
    std::vector<neural::Vector<Scalar>> parts{inputs.row(t).transpose()};
    if (ctx) parts.push_back(ctx->row(t).transpose());
    parts.push_back(label_embedding.col(labels(t, logits)));
    state = neural::LstmCellForward<Scalar>(Concat(parts), state.h, state.c,
                                            cell);
    logits.row(t) =
        Affine<Scalar>(params, layer + ".output", state.h).transpose();
  }
  return logits;
}

}  // namespace reference_internal

// Teacher-forced when `gold` is given, greedy otherwise.
template <typename Scalar>
ReferenceOutput<Scalar> ReferenceForward(const Model &model,
                                         const neural::Matrix<Scalar> &embedded,
                                         const GoldLabels *gold) {
  namespace ri = reference_internal;
  const auto &params = model.params();
  const ModelConfig &config = model.config();
  const Eigen::Index T = embedded.rows();
  const Eigen::Index h = config.hidden_size;

  const neural::Matrix<Scalar> encoded = neural::BiLstmForward<Scalar>(
      embedded, ri::Lstm<Scalar>(params, "layer1.fwd"),
      ri::Lstm<Scalar>(params, "layer1.bwd"));
  neural::Vector<Scalar> final_state(2 * h);
  final_state << encoded.row(T - 1).head(h).transpose(),
      encoded.row(0).tail(h).transpose();

  ReferenceOutput<Scalar> out;
  neural::Vector<Scalar> sentence = final_state;
  if (config.attention) {
    sentence = neural::Attend<Scalar>(
                   final_state.transpose(), encoded,
                   ri::Attention<Scalar>(params, "ad.attention"))
                   .contexts.row(0)
                   .transpose();
  }
  out.ad_logits = ri::Affine<Scalar>(params, "ad.output", sentence);

  std::optional<neural::Matrix<Scalar>> ctx2;
  if (config.attention) {
    ctx2 = neural::Attend<Scalar>(
               encoded, encoded,
               ri::Attention<Scalar>(params, "layer2.attention"))
               .contexts;
  }
  const neural::Matrix<Scalar> labels2 =
      ri::Value<Scalar>(params, "layer2.label_embedding");
  const Eigen::Index bos = labels2.cols() - 1;
  const auto n_ai = static_cast<Eigen::Index>(model.ai_labels().size());
  out.ai_logits = ri::Decode<Scalar>(
      params, "layer2", encoded, ctx2, labels2, n_ai,
      [&](Eigen::Index t, const neural::Matrix<Scalar> &logits) {
        if (t == 0) return bos;
        if (gold) return static_cast<Eigen::Index>(gold->ai[t - 1]);
        return ri::ArgmaxOf<Scalar>(logits.row(t - 1).transpose());
      });

  if (config.variant == Variant::k3L) {
    const auto highway = neural::HighwayParams<Scalar>{
        ri::Value<Scalar>(params, "layer3.highway.W_H"),
        ri::Value<Scalar>(params, "layer3.highway.b_H").col(0),
        ri::Value<Scalar>(params, "layer3.highway.W_T"),
        ri::Value<Scalar>(params, "layer3.highway.b_T").col(0)};
    neural::Matrix<Scalar> carried(T, 2 * h);
    for (Eigen::Index t = 0; t < T; ++t) {
      carried.row(t) =
          neural::Highway<Scalar>(encoded.row(t).transpose(), highway)
              .transpose();
    }
    std::optional<neural::Matrix<Scalar>> ctx3;
    if (config.attention) {
      ctx3 = neural::Attend<Scalar>(
                 carried, carried,
                 ri::Attention<Scalar>(params, "layer3.attention"))
                 .contexts;
    }
    const auto n_ac = static_cast<Eigen::Index>(model.vocab().ac_labels.size());
    const neural::Matrix<Scalar> &ai = out.ai_logits;
    out.ac_logits = ri::Decode<Scalar>(
        params, "layer3", carried, ctx3,
        ri::Value<Scalar>(params, "layer3.label_embedding"), n_ac,
        [&](Eigen::Index t, const neural::Matrix<Scalar> &) {
          if (gold) return static_cast<Eigen::Index>(gold->ai[t]);
          return ri::ArgmaxOf<Scalar>(ai.row(t).transpose());
        });
  }
  return out;
}

// Joint loss of a teacher-forced reference pass.
template <typename Scalar>
Scalar ReferenceLoss(const Model &model, const neural::Matrix<Scalar> &embedded,
                     const GoldLabels &gold) {
  const ReferenceOutput<Scalar> out =
      ReferenceForward<Scalar>(model, embedded, &gold);
  auto xent = [](const neural::Vector<Scalar> &logits, int g) {
    return neural::CrossEntropy<Scalar>(neural::Softmax<Scalar>(logits), g);
  };
  const Eigen::Index T = out.ai_logits.rows();
  Scalar loss = xent(out.ad_logits, gold.frame);
  Scalar ai = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    ai += xent(out.ai_logits.row(t).transpose(), gold.ai[t]);
  }
  loss += ai / Scalar(T);
  if (out.ac_logits) {
    Scalar ac = 0;
    for (Eigen::Index t = 0; t < T; ++t) {
      ac += xent(out.ac_logits->row(t).transpose(), gold.ac[t]);
    }
    loss += ac / Scalar(T);
  }
  return loss;
}

}  // namespace framelstm

#endif  // FRAMELSTM_REFERENCE_MODEL_H_
