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

#ifndef FRAMELSTM_NEURAL_LAYERS_H_
#define FRAMELSTM_NEURAL_LAYERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "framelstm/neural/autodiff.h"
#include "framelstm/neural/functional.h"
#include "framelstm/neural/parameters.h"

namespace framelstm::neural {

// Each layer has three entry points: Add*Params creates and initializes the
// named parameters under a prefix, Bind* places them on a tape, and the layer
// function records the forward computation.

// LSTM cell: "<prefix>.W_i" ... "<prefix>.b_g". Forget-gate bias starts at 1.
void AddLstmCellParams(ParameterSet &params, const std::string &prefix,
                       Eigen::Index input_size, Eigen::Index hidden_size,
                       uint64_t seed);

struct LstmCellVars {
  Var W_i, W_f, W_o, W_g;
  Var U_i, U_f, U_o, U_g;
  Var b_i, b_f, b_o, b_g;
  Eigen::Index hidden_size = 0;
};

LstmCellVars BindLstmCell(Tape &tape, const ParameterSet &params,
                          const std::string &prefix);

struct LstmStateVars {
  Var h;
  Var c;
};

LstmStateVars ZeroLstmState(Tape &tape, Eigen::Index hidden_size);
LstmStateVars LstmCell(const LstmCellVars &cell, Var x,
                       const LstmStateVars &state);

// Hidden state after each input; with `reverse` the recurrence runs from the
// last input, but out[t] still corresponds to inputs[t].
std::vector<Var> LstmSequence(const LstmCellVars &cell,
                              const std::vector<Var> &inputs, bool reverse);

// Additive attention: "<prefix>.W_query" (a x dq), "<prefix>.W_key"
// (a x dk), "<prefix>.v" (a x 1).
void AddAttentionParams(ParameterSet &params, const std::string &prefix,
                        Eigen::Index query_size, Eigen::Index key_size,
                        Eigen::Index attention_size, uint64_t seed);

struct AttentionVars {
  Var W_query, W_key, v;
};

AttentionVars BindAttention(Tape &tape, const ParameterSet &params,
                            const std::string &prefix);

struct AttendResult {
  Var context;  // dk x 1
  Var weights;  // 1 x T
};

// `keys` holds one key per column (dk x T); `projected_keys` is
// W_key * keys, shared across queries.
Var ProjectKeys(const AttentionVars &attention, Var keys);
AttendResult Attend(const AttentionVars &attention, Var query, Var keys,
                    Var projected_keys);

// Highway: "<prefix>.W_H", "<prefix>.b_H", "<prefix>.W_T", "<prefix>.b_T".
// The gate bias starts at -2 so the layer initially carries its input.
inline constexpr double kHighwayGateBias = -2.0;
void AddHighwayParams(ParameterSet &params, const std::string &prefix,
                      Eigen::Index size, uint64_t seed);

struct HighwayVars {
  Var W_H, b_H, W_T, b_T;
};

HighwayVars BindHighway(Tape &tape, const ParameterSet &params,
                        const std::string &prefix);
Var Highway(const HighwayVars &highway, Var x);

// Affine map "<prefix>.W" (out x in), "<prefix>.b" (out).
void AddAffineParams(ParameterSet &params, const std::string &prefix,
                     Eigen::Index input_size, Eigen::Index output_size,
                     uint64_t seed);

struct AffineVars {
  Var W, b;
};

AffineVars BindAffine(Tape &tape, const ParameterSet &params,
                      const std::string &prefix);
Var Affine(const AffineVars &affine, Var x);

// Copies of the named parameters as plain Eigen structures, for use with
// the reference functions in functional.h.
LstmCellParams<double> ExtractLstmCell(const ParameterSet &params,
                                       const std::string &prefix);
AttentionParams<double> ExtractAttention(const ParameterSet &params,
                                         const std::string &prefix);
HighwayParams<double> ExtractHighway(const ParameterSet &params,
                                     const std::string &prefix);

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_LAYERS_H_
