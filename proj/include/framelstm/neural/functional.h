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

#ifndef FRAMELSTM_NEURAL_FUNCTIONAL_H_
#define FRAMELSTM_NEURAL_FUNCTIONAL_H_

// Pure forward definitions of the network building blocks on Eigen dense
// types. The training graph in autodiff.h composes the same formulas from
// differentiable primitives; these functions are the reference it is tested
// against.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace framelstm::neural {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Scalar Sigmoid(Scalar x) {
  using std::exp;
  return Scalar(1) / (Scalar(1) + exp(-x));
}

// Per-gate LSTM weights: W_* is hidden x input, U_* is hidden x hidden.
template <typename Scalar>
struct LstmCellParams {
  Matrix<Scalar> W_i, W_f, W_o, W_g;
  Matrix<Scalar> U_i, U_f, U_o, U_g;
  Vector<Scalar> b_i, b_f, b_o, b_g;

  Eigen::Index input_size() const { return W_i.cols(); }
  Eigen::Index hidden_size() const { return W_i.rows(); }

  void Validate() const {
    const auto h = hidden_size(), d = input_size();
    for (const auto *w : {&W_i, &W_f, &W_o, &W_g}) {
      if (w->rows() != h || w->cols() != d)
        throw DimensionError("LSTM input weights disagree in shape");
    }
    for (const auto *u : {&U_i, &U_f, &U_o, &U_g}) {
      if (u->rows() != h || u->cols() != h)
        throw DimensionError("LSTM recurrent weights must be hidden x hidden");
    }
    for (const auto *b : {&b_i, &b_f, &b_o, &b_g}) {
      if (b->size() != h) throw DimensionError("LSTM bias has wrong length");
    }
  }
};

template <typename Scalar>
struct LstmState {
  Vector<Scalar> h;
  Vector<Scalar> c;
};

// i = s(W_i x + U_i h + b_i), f, o likewise, g = tanh(...),
// c' = f*c + i*g, h' = o*tanh(c').
template <typename Scalar>
LstmState<Scalar> LstmCellForward(const Vector<Scalar> &x,
                                  const Vector<Scalar> &h,
                                  const Vector<Scalar> &c,
                                  const LstmCellParams<Scalar> &p) {
  p.Validate();
  if (x.size() != p.input_size() || h.size() != p.hidden_size() ||
      c.size() != p.hidden_size()) {
    throw DimensionError("LSTM cell input or state has wrong length");
  }
  auto sigmoid = [](Scalar v) { return Sigmoid(v); };
  auto tanh = [](Scalar v) {
    using std::tanh;
    return tanh(v);
  };
  Vector<Scalar> i = (p.W_i * x + p.U_i * h + p.b_i).unaryExpr(sigmoid);
  Vector<Scalar> f = (p.W_f * x + p.U_f * h + p.b_f).unaryExpr(sigmoid);
  Vector<Scalar> o = (p.W_o * x + p.U_o * h + p.b_o).unaryExpr(sigmoid);
  Vector<Scalar> g = (p.W_g * x + p.U_g * h + p.b_g).unaryExpr(tanh);
  LstmState<Scalar> next;
  next.c = f.cwiseProduct(c) + i.cwiseProduct(g);
  next.h = o.cwiseProduct(next.c.unaryExpr(tanh));
  return next;
}

// Runs the cell over rows of `seq` (T x d) from zero state; returns T x h.
template <typename Scalar>
Matrix<Scalar> LstmForward(const Matrix<Scalar> &seq,
                           const LstmCellParams<Scalar> &p, bool reverse) {
  const Eigen::Index T = seq.rows(), h = p.hidden_size();
  if (T < 1) throw DimensionError("empty sequence");
  Matrix<Scalar> out(T, h);
  LstmState<Scalar> state{Vector<Scalar>::Zero(h), Vector<Scalar>::Zero(h)};
  for (Eigen::Index step = 0; step < T; ++step) {
    const Eigen::Index t = reverse ? T - 1 - step : step;
    state = LstmCellForward<Scalar>(seq.row(t).transpose(), state.h, state.c,
                                    p);
    out.row(t) = state.h.transpose();
  }
  return out;
}

// Row t = [forward state at t, backward state at t]; T x 2h.
template <typename Scalar>
Matrix<Scalar> BiLstmForward(const Matrix<Scalar> &seq,
                             const LstmCellParams<Scalar> &fwd,
                             const LstmCellParams<Scalar> &bwd) {
  if (fwd.hidden_size() != bwd.hidden_size())
    throw DimensionError("BiLSTM directions differ in hidden size");
  Matrix<Scalar> out(seq.rows(), 2 * fwd.hidden_size());
  out << LstmForward(seq, fwd, false), LstmForward(seq, bwd, true);
  return out;
}

// Additive scoring: score(q, k) = v . tanh(W_query q + W_key k).
template <typename Scalar>
struct AttentionParams {
  Matrix<Scalar> W_query;  // a x dq
  Matrix<Scalar> W_key;    // a x dk
  Vector<Scalar> v;        // a
};

template <typename Scalar>
struct AttentionResult {
  Matrix<Scalar> contexts;  // Q x dk
  Matrix<Scalar> weights;   // Q x T
};

template <typename Scalar>
Vector<Scalar> Softmax(const Vector<Scalar> &logits) {
  if (logits.size() == 0) throw DimensionError("softmax of empty vector");
  using std::exp;
  const Scalar max = logits.maxCoeff();
  Vector<Scalar> e = (logits.array() - max).unaryExpr([](Scalar v) {
    return exp(v);
  });
  return e / e.sum();
}

// Rows of `queries` attend over rows of `keys`; values are the keys.
template <typename Scalar>
AttentionResult<Scalar> Attend(const Matrix<Scalar> &queries,
                               const Matrix<Scalar> &keys,
                               const AttentionParams<Scalar> &p) {
  const Eigen::Index a = p.v.size();
  if (p.W_query.rows() != a || p.W_key.rows() != a ||
      p.W_query.cols() != queries.cols() || p.W_key.cols() != keys.cols()) {
    throw DimensionError("attention parameters do not match inputs");
  }
  if (keys.rows() < 1) throw DimensionError("attention over zero keys");
  const Matrix<Scalar> projected_keys = p.W_key * keys.transpose();  // a x T
  AttentionResult<Scalar> out;
  out.contexts.resize(queries.rows(), keys.cols());
  out.weights.resize(queries.rows(), keys.rows());
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    const Vector<Scalar> pq = p.W_query * queries.row(q).transpose();
    Matrix<Scalar> hidden = projected_keys.colwise() + pq;
    hidden = hidden.unaryExpr([](Scalar v) {
      using std::tanh;
      return tanh(v);
    });
    const Vector<Scalar> scores = (p.v.transpose() * hidden).transpose();
    const Vector<Scalar> w = Softmax<Scalar>(scores);
    out.weights.row(q) = w.transpose();
    out.contexts.row(q) = w.transpose() * keys;
  }
  return out;
}

// y = t * tanh(W_H x + b_H) + (1 - t) * x,  t = s(W_T x + b_T).
template <typename Scalar>
struct HighwayParams {
  Matrix<Scalar> W_H;
  Vector<Scalar> b_H;
  Matrix<Scalar> W_T;
  Vector<Scalar> b_T;
};

template <typename Scalar>
Vector<Scalar> Highway(const Vector<Scalar> &x,
                       const HighwayParams<Scalar> &p) {
  const Eigen::Index n = x.size();
  if (p.W_H.rows() != p.W_H.cols() || p.W_T.rows() != p.W_T.cols())
    throw DimensionError("highway transform must be square");
  if (p.W_H.cols() != n || p.W_T.cols() != n || p.b_H.size() != n ||
      p.b_T.size() != n) {
    throw DimensionError("highway parameters do not match input");
  }
  const Vector<Scalar> transform = (p.W_H * x + p.b_H).unaryExpr([](Scalar v) {
    using std::tanh;
    return tanh(v);
  });
  const Vector<Scalar> gate =
      (p.W_T * x + p.b_T).unaryExpr([](Scalar v) { return Sigmoid(v); });
  return gate.cwiseProduct(transform) +
         (Vector<Scalar>::Ones(n) - gate).cwiseProduct(x);
}

inline constexpr double kProbabilityFloor = 1e-12;

// -ln p[gold] with p clamped below at 1e-12.
template <typename Scalar>
Scalar CrossEntropy(const Vector<Scalar> &probabilities, Eigen::Index gold) {
  if (gold < 0 || gold >= probabilities.size())
    throw DimensionError("gold index " + std::to_string(gold) +
                         " out of range");
  using std::log;
  using std::max;
  return -log(max(probabilities[gold], Scalar(kProbabilityFloor)));
}

}  // namespace framelstm::neural

#endif  // FRAMELSTM_NEURAL_FUNCTIONAL_H_
