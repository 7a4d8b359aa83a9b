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

#ifndef FRAMELSTM_TESTS_ORACLES_H_
#define FRAMELSTM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/metrics.h"
#include "framelstm/neural/functional.h"
#include "framelstm/random.h"
#include "test_util.h"

namespace framelstm::neural::oracle {

// Plain nested-vector transcriptions of the defining formulas. They share no
// code with the Eigen implementations under test.
using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major

constexpr double kOracleTolerance = 1e-10;

inline Mat RandomMat(Rng &rng, int rows, int cols, double scale = 1.0) {
  Mat m(rows, Vec(cols));
  for (auto &row : m) {
    for (auto &v : row) v = UniformReal(rng, -scale, scale);
  }
  return m;
}

inline Vec RandomVec(Rng &rng, int n, double scale = 1.0) {
  Vec v(n);
  for (auto &x : v) x = UniformReal(rng, -scale, scale);
  return v;
}

inline Matrix<double> ToEigen(const Mat &m) {
  Matrix<double> out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[r].size(); ++c) out(r, c) = m[r][c];
  }
  return out;
}

inline Vector<double> ToEigen(const Vec &v) {
  Vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

inline double OracleSigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vec Gate(const Mat &W, const Mat &U, const Vec &b, const Vec &x,
                const Vec &h, double (*f)(double)) {
  Vec out(b.size());
  for (std::size_t r = 0; r < b.size(); ++r) {
    double z = b[r];
    for (std::size_t c = 0; c < x.size(); ++c) z += W[r][c] * x[c];
    for (std::size_t c = 0; c < h.size(); ++c) z += U[r][c] * h[c];
    out[r] = f(z);
  }
  return out;
}

struct OracleLstm {
  Mat W[4], U[4];
  Vec b[4];  // i, f, o, g

  LstmCellParams<double> ToParams() const {
    LstmCellParams<double> p;
    p.W_i = ToEigen(W[0]);
    p.W_f = ToEigen(W[1]);
    p.W_o = ToEigen(W[2]);
    p.W_g = ToEigen(W[3]);
    p.U_i = ToEigen(U[0]);
    p.U_f = ToEigen(U[1]);
    p.U_o = ToEigen(U[2]);
    p.U_g = ToEigen(U[3]);
    p.b_i = ToEigen(b[0]);
    p.b_f = ToEigen(b[1]);
    p.b_o = ToEigen(b[2]);
    p.b_g = ToEigen(b[3]);
    return p;
  }

  void Step(const Vec &x, Vec &h, Vec &c) const {
    const Vec i = Gate(W[0], U[0], b[0], x, h, OracleSigmoid);
    const Vec f = Gate(W[1], U[1], b[1], x, h, OracleSigmoid);
    const Vec o = Gate(W[2], U[2], b[2], x, h, OracleSigmoid);
    const Vec g = Gate(W[3], U[3], b[3], x, h,
                       [](double z) { return std::tanh(z); });
    for (std::size_t k = 0; k < c.size(); ++k) {
      c[k] = f[k] * c[k] + i[k] * g[k];
      h[k] = o[k] * std::tanh(c[k]);
    }
  }
};

inline OracleLstm RandomLstm(Rng &rng, int in, int hidden) {
  OracleLstm p;
  for (int g = 0; g < 4; ++g) {
    p.W[g] = RandomMat(rng, hidden, in);
    p.U[g] = RandomMat(rng, hidden, hidden);
    p.b[g] = RandomVec(rng, hidden);
  }
  return p;
}

inline Mat OracleBiLstm(const Mat &seq, const OracleLstm &fwd,
                        const OracleLstm &bwd, int hidden) {
  const int T = seq.size();
  Mat out(T, Vec(2 * hidden));
  Vec h(hidden, 0.0), c(hidden, 0.0);
  for (int t = 0; t < T; ++t) {
    fwd.Step(seq[t], h, c);
    for (int k = 0; k < hidden; ++k) out[t][k] = h[k];
  }
  h.assign(hidden, 0.0);
  c.assign(hidden, 0.0);
  for (int t = T - 1; t >= 0; --t) {
    bwd.Step(seq[t], h, c);
    for (int k = 0; k < hidden; ++k) out[t][hidden + k] = h[k];
  }
  return out;
}

struct OracleAttention {
  Mat Wq, Wk;
  Vec v;
};

// contexts (Q x dk) then weights (Q x T).
inline std::pair<Mat, Mat> OracleAttend(const Mat &queries, const Mat &keys,
                                        const OracleAttention &p) {
  const std::size_t a = p.v.size();
  Mat contexts, weights;
  for (const Vec &q : queries) {
    Vec scores;
    for (const Vec &k : keys) {
      double s = 0.0;
      for (std::size_t r = 0; r < a; ++r) {
        double z = 0.0;
        for (std::size_t c = 0; c < q.size(); ++c) z += p.Wq[r][c] * q[c];
        for (std::size_t c = 0; c < k.size(); ++c) z += p.Wk[r][c] * k[c];
        s += p.v[r] * std::tanh(z);
      }
      scores.push_back(s);
    }
    double max = scores[0];
    for (double s : scores) max = std::max(max, s);
    double total = 0.0;
    Vec w;
    for (double s : scores) {
      w.push_back(std::exp(s - max));
      total += w.back();
    }
    for (double &x : w) x /= total;
    Vec ctx(keys[0].size(), 0.0);
    for (std::size_t t = 0; t < keys.size(); ++t) {
      for (std::size_t c = 0; c < ctx.size(); ++c) ctx[c] += w[t] * keys[t][c];
    }
    contexts.push_back(ctx);
    weights.push_back(w);
  }
  return {contexts, weights};
}

inline Vec OracleHighway(const Vec &x, const Mat &WH, const Vec &bH,
                         const Mat &WT, const Vec &bT) {
  Vec y(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) {
    double h = bH[r], t = bT[r];
    for (std::size_t c = 0; c < x.size(); ++c) {
      h += WH[r][c] * x[c];
      t += WT[r][c] * x[c];
    }
    const double gate = OracleSigmoid(t);
    y[r] = gate * std::tanh(h) + (1.0 - gate) * x[r];
  }
  return y;
}

// Largest absolute deviation between implementation and oracle over `n`
// seeded random instances.
inline double LstmCellSweep(int n, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const int in = 1 + UniformIndex(rng, 6), hidden = 1 + UniformIndex(rng, 6);
    const OracleLstm oracle = RandomLstm(rng, in, hidden);
    const Vec x = RandomVec(rng, in), h0 = RandomVec(rng, hidden),
              c0 = RandomVec(rng, hidden);
    Vec h = h0, c = c0;
    oracle.Step(x, h, c);
    const auto s = LstmCellForward<double>(ToEigen(x), ToEigen(h0),
                                           ToEigen(c0), oracle.ToParams());
    for (int k = 0; k < hidden; ++k) {
      worst = std::max({worst, std::abs(s.h[k] - h[k]),
                        std::abs(s.c[k] - c[k])});
    }
  }
  return worst;
}

inline double BiLstmSweep(int n, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const int in = 1 + UniformIndex(rng, 5), hidden = 1 + UniformIndex(rng, 5);
    const int T = 1 + UniformIndex(rng, 7);
    const OracleLstm fwd = RandomLstm(rng, in, hidden);
    const OracleLstm bwd = RandomLstm(rng, in, hidden);
    const Mat seq = RandomMat(rng, T, in);
    const Mat expected = OracleBiLstm(seq, fwd, bwd, hidden);
    const Matrix<double> got =
        BiLstmForward<double>(ToEigen(seq), fwd.ToParams(), bwd.ToParams());
    if (got.rows() != T || got.cols() != 2 * hidden) return INFINITY;
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < 2 * hidden; ++k) {
        worst = std::max(worst, std::abs(got(t, k) - expected[t][k]));
      }
    }
  }
  return worst;
}

inline double AttentionSweep(int n, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const int dq = 1 + UniformIndex(rng, 5), dk = 1 + UniformIndex(rng, 5);
    const int a = 1 + UniformIndex(rng, 5);
    const int Q = 1 + UniformIndex(rng, 4), T = 1 + UniformIndex(rng, 6);
    OracleAttention p{RandomMat(rng, a, dq), RandomMat(rng, a, dk),
                      RandomVec(rng, a)};
    const Mat queries = RandomMat(rng, Q, dq), keys = RandomMat(rng, T, dk);
    const auto [contexts, weights] = OracleAttend(queries, keys, p);
    const auto got = Attend<double>(
        ToEigen(queries), ToEigen(keys),
        AttentionParams<double>{ToEigen(p.Wq), ToEigen(p.Wk), ToEigen(p.v)});
    for (int q = 0; q < Q; ++q) {
      for (int t = 0; t < T; ++t) {
        worst = std::max(worst, std::abs(got.weights(q, t) - weights[q][t]));
      }
      for (int c = 0; c < dk; ++c) {
        worst =
            std::max(worst, std::abs(got.contexts(q, c) - contexts[q][c]));
      }
    }
  }
  return worst;
}

inline double HighwaySweep(int n, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const int d = 1 + UniformIndex(rng, 8);
    const Mat WH = RandomMat(rng, d, d), WT = RandomMat(rng, d, d);
    const Vec bH = RandomVec(rng, d), bT = RandomVec(rng, d);
    const Vec x = RandomVec(rng, d, 2.0);
    const Vec expected = OracleHighway(x, WH, bH, WT, bT);
    const Vector<double> got = Highway<double>(
        ToEigen(x), {ToEigen(WH), ToEigen(bH), ToEigen(WT), ToEigen(bT)});
    for (int k = 0; k < d; ++k) {
      worst = std::max(worst, std::abs(got[k] - expected[k]));
    }
  }
  return worst;
}

// Softmax probabilities and the cross-entropy of a random gold index.
inline double SoftmaxCrossEntropySweep(int n, uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const Vec z = RandomVec(rng, 1 + UniformIndex(rng, 9), 4);
    const std::size_t gold = UniformIndex(rng, z.size());
    double max = z[0];
    for (double v : z) max = std::max(max, v);
    double total = 0.0;
    for (double v : z) total += std::exp(v - max);
    const Vector<double> p = Softmax<double>(ToEigen(z));
    for (std::size_t i = 0; i < z.size(); ++i) {
      worst = std::max(worst, std::abs(p[i] - std::exp(z[i] - max) / total));
    }
    const double ce = -(z[gold] - max - std::log(total));
    worst = std::max(
        worst, std::abs(CrossEntropy<double>(p, static_cast<int>(gold)) - ce));
  }
  return worst;
}

}  // namespace framelstm::neural::oracle

namespace framelstm::testing {

// Nested-loop set intersection over deduplicated lists.
inline PrfScore BruteForceF1(const std::vector<FrameElement> &gold_in,
                             const std::vector<FrameElement> &pred_in) {
  auto dedupe = [](const std::vector<FrameElement> &in) {
    std::vector<FrameElement> out;
    for (const auto &e : in) {
      bool seen = false;
      for (const auto &o : out) seen = seen || o == e;
      if (!seen) out.push_back(e);
    }
    return out;
  };
  const auto gold = dedupe(gold_in);
  const auto pred = dedupe(pred_in);
  if (gold.empty() && pred.empty()) return {1.0, 1.0, 1.0};
  int hits = 0;
  for (const auto &p : pred) {
    for (const auto &g : gold) {
      if (p.type == g.type && p.span.start == g.span.start &&
          p.span.end == g.span.end) {
        ++hits;
      }
    }
  }
  PrfScore s;
  s.precision = pred.empty() ? 0.0 : double(hits) / double(pred.size());
  s.recall = gold.empty() ? 0.0 : double(hits) / double(gold.size());
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

inline std::vector<FrameElement> RandomElements(Rng &rng) {
  static const char *kTypes[] = {"Goal", "Theme", "Source"};
  std::vector<FrameElement> out;
  const int n = UniformInt(rng, 0, 4);
  for (int i = 0; i < n; ++i) {
    const int start = UniformInt(rng, 0, 5);
    out.push_back({kTypes[UniformInt(rng, 0, 2)],
                   {start, start + UniformInt(rng, 0, 2)}});
  }
  return out;
}

// Random non-overlapping spans over a random-length sentence.
inline AnnotatedSentence RandomSpanSentence(Rng &rng) {
  static const std::vector<std::string> kTypes = {"Goal", "Theme", "Source",
                                                  "Agent"};
  AnnotatedSentence s;
  s.id = "r";
  const int n = 1 + static_cast<int>(UniformIndex(rng, 15));
  s.tokens.assign(n, "w");
  s.frame.frame_type = "F";
  int t = 0;
  while (t < n) {
    if (UniformUnit(rng) < 0.4) {
      const int len = 1 + static_cast<int>(UniformIndex(rng, n - t));
      s.frame.elements.push_back(
          {kTypes[UniformIndex(rng, kTypes.size())], {t, t + len - 1}});
      t += len;
    } else {
      ++t;
    }
  }
  return s;
}

}  // namespace framelstm::testing

#endif  // FRAMELSTM_TESTS_ORACLES_H_
