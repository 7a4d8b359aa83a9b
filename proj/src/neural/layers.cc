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

#include "framelstm/neural/layers.h"

namespace framelstm::neural {

namespace {

constexpr const char *kGates[] = {"i", "f", "o", "g"};

Var BindNamed(Tape &tape, const ParameterSet &params, const std::string &name) {
  return tape.Param(params.Get(name));
}

Var Gate(Var W, Var U, Var b, Var x, Var h) { return W * x + U * h + b; }

}  // namespace

void AddLstmCellParams(ParameterSet &params, const std::string &prefix,
                       Eigen::Index input_size, Eigen::Index hidden_size,
                       uint64_t seed) {
  for (const char *g : kGates) {
    params.Add(prefix + ".W_" + g, hidden_size, input_size, seed,
               InitScheme::kGlorotUniform);
  }
  for (const char *g : kGates) {
    params.Add(prefix + ".U_" + g, hidden_size, hidden_size, seed,
               InitScheme::kGlorotUniform);
  }
  for (const char *g : kGates) {
    const bool forget = std::string(g) == "f";
    params.Add(prefix + ".b_" + g, hidden_size, 1, seed,
               forget ? InitScheme::kForgetBiasOne : InitScheme::kZeros);
  }
}

LstmCellVars BindLstmCell(Tape &tape, const ParameterSet &params,
                          const std::string &prefix) {
  LstmCellVars cell;
  cell.W_i = BindNamed(tape, params, prefix + ".W_i");
  cell.W_f = BindNamed(tape, params, prefix + ".W_f");
  cell.W_o = BindNamed(tape, params, prefix + ".W_o");
  cell.W_g = BindNamed(tape, params, prefix + ".W_g");
  cell.U_i = BindNamed(tape, params, prefix + ".U_i");
  cell.U_f = BindNamed(tape, params, prefix + ".U_f");
  cell.U_o = BindNamed(tape, params, prefix + ".U_o");
  cell.U_g = BindNamed(tape, params, prefix + ".U_g");
  cell.b_i = BindNamed(tape, params, prefix + ".b_i");
  cell.b_f = BindNamed(tape, params, prefix + ".b_f");
  cell.b_o = BindNamed(tape, params, prefix + ".b_o");
  cell.b_g = BindNamed(tape, params, prefix + ".b_g");
  cell.hidden_size = cell.W_i.rows();
  return cell;
}

LstmStateVars ZeroLstmState(Tape &tape, Eigen::Index hidden_size) {
  return {tape.Constant(Eigen::MatrixXd::Zero(hidden_size, 1)),
          tape.Constant(Eigen::MatrixXd::Zero(hidden_size, 1))};
}

LstmStateVars LstmCell(const LstmCellVars &p, Var x,
                       const LstmStateVars &state) {
  Var i = Sigmoid(Gate(p.W_i, p.U_i, p.b_i, x, state.h));
  Var f = Sigmoid(Gate(p.W_f, p.U_f, p.b_f, x, state.h));
  Var o = Sigmoid(Gate(p.W_o, p.U_o, p.b_o, x, state.h));
  Var g = Tanh(Gate(p.W_g, p.U_g, p.b_g, x, state.h));
  Var c = Hadamard(f, state.c) + Hadamard(i, g);
  Var h = Hadamard(o, Tanh(c));
  return {h, c};
}

std::vector<Var> LstmSequence(const LstmCellVars &cell,
                              const std::vector<Var> &inputs, bool reverse) {
  if (inputs.empty()) throw DimensionError("empty sequence");
  std::vector<Var> out(inputs.size());
  LstmStateVars state = ZeroLstmState(*inputs.front().tape(), cell.hidden_size);
  const std::size_t T = inputs.size();
  for (std::size_t step = 0; step < T; ++step) {
    const std::size_t t = reverse ? T - 1 - step : step;
    state = LstmCell(cell, inputs[t], state);
    out[t] = state.h;
  }
  return out;
}

void AddAttentionParams(ParameterSet &params, const std::string &prefix,
                        Eigen::Index query_size, Eigen::Index key_size,
                        Eigen::Index attention_size, uint64_t seed) {
  params.Add(prefix + ".W_query", attention_size, query_size, seed,
             InitScheme::kGlorotUniform);
  params.Add(prefix + ".W_key", attention_size, key_size, seed,
             InitScheme::kGlorotUniform);
  params.Add(prefix + ".v", attention_size, 1, seed,
             InitScheme::kGlorotUniform);
}

AttentionVars BindAttention(Tape &tape, const ParameterSet &params,
                            const std::string &prefix) {
  return {BindNamed(tape, params, prefix + ".W_query"),
          BindNamed(tape, params, prefix + ".W_key"),
          BindNamed(tape, params, prefix + ".v")};
}

Var ProjectKeys(const AttentionVars &attention, Var keys) {
  return attention.W_key * keys;
}

AttendResult Attend(const AttentionVars &attention, Var query, Var keys,
                    Var projected_keys) {
  Var hidden = Tanh(AddColumn(projected_keys, attention.W_query * query));
  Var scores = Transpose(attention.v) * hidden;  // 1 x T
  Var weights = Softmax(scores);
  Var context = keys * Transpose(weights);
  return {context, weights};
}

void AddHighwayParams(ParameterSet &params, const std::string &prefix,
                      Eigen::Index size, uint64_t seed) {
  params.Add(prefix + ".W_H", size, size, seed, InitScheme::kGlorotUniform);
  params.Add(prefix + ".b_H", size, 1, seed, InitScheme::kZeros);
  params.Add(prefix + ".W_T", size, size, seed, InitScheme::kGlorotUniform);
  params.Add(prefix + ".b_T",
             Eigen::MatrixXd::Constant(size, 1, kHighwayGateBias));
}

HighwayVars BindHighway(Tape &tape, const ParameterSet &params,
                        const std::string &prefix) {
  return {BindNamed(tape, params, prefix + ".W_H"),
          BindNamed(tape, params, prefix + ".b_H"),
          BindNamed(tape, params, prefix + ".W_T"),
          BindNamed(tape, params, prefix + ".b_T")};
}

Var Highway(const HighwayVars &p, Var x) {
  if (p.W_H.rows() != p.W_H.cols() || p.W_T.rows() != p.W_T.cols()) {
    throw DimensionError("highway transform must be square");
  }
  Var transform = Tanh(p.W_H * x + p.b_H);
  Var gate = Sigmoid(p.W_T * x + p.b_T);
  return Hadamard(gate, transform) + Hadamard(OneMinus(gate), x);
}

void AddAffineParams(ParameterSet &params, const std::string &prefix,
                     Eigen::Index input_size, Eigen::Index output_size,
                     uint64_t seed) {
  params.Add(prefix + ".W", output_size, input_size, seed,
             InitScheme::kGlorotUniform);
  params.Add(prefix + ".b", output_size, 1, seed, InitScheme::kZeros);
}

AffineVars BindAffine(Tape &tape, const ParameterSet &params,
                      const std::string &prefix) {
  return {BindNamed(tape, params, prefix + ".W"),
          BindNamed(tape, params, prefix + ".b")};
}

Var Affine(const AffineVars &affine, Var x) { return affine.W * x + affine.b; }

LstmCellParams<double> ExtractLstmCell(const ParameterSet &params,
                                       const std::string &prefix) {
  auto get = [&](const char *name) -> const Eigen::MatrixXd & {
    return params.Get(prefix + "." + name).value;
  };
  LstmCellParams<double> p;
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

AttentionParams<double> ExtractAttention(const ParameterSet &params,
                                         const std::string &prefix) {
  AttentionParams<double> p;
  p.W_query = params.Get(prefix + ".W_query").value;
  p.W_key = params.Get(prefix + ".W_key").value;
  p.v = params.Get(prefix + ".v").value.col(0);
  return p;
}

HighwayParams<double> ExtractHighway(const ParameterSet &params,
                                     const std::string &prefix) {
  HighwayParams<double> p;
  p.W_H = params.Get(prefix + ".W_H").value;
  p.b_H = params.Get(prefix + ".b_H").value.col(0);
  p.W_T = params.Get(prefix + ".W_T").value;
  p.b_T = params.Get(prefix + ".b_T").value.col(0);
  return p;
}

}  // namespace framelstm::neural
