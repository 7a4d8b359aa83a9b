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

#include <cmath>

#include <gtest/gtest.h>

#include "framelstm/neural/functional.h"
#include "framelstm/neural/grad_check.h"
#include "framelstm/random.h"

namespace framelstm::neural {
namespace {

Eigen::MatrixXd RandomMatrix(Rng &rng, Eigen::Index r, Eigen::Index c,
                             double scale = 1.0) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = UniformReal(rng, -scale, scale);
  }
  return m;
}

std::vector<Var> Columns(Tape &tape, const Eigen::MatrixXd &rows) {
  std::vector<Var> out;
  for (Eigen::Index t = 0; t < rows.rows(); ++t) {
    out.push_back(tape.Constant(rows.row(t).transpose()));
  }
  return out;
}

TEST(InitParamsTest, GlorotBound) {
  const Eigen::MatrixXd m =
      InitParams(4, 4, 1, InitScheme::kGlorotUniform, "w");
  EXPECT_LE(m.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 8.0));
  EXPECT_NEAR(std::sqrt(6.0 / 8.0), 0.8660, 1e-4);
  const Eigen::MatrixXd big =
      InitParams(50, 70, 1, InitScheme::kGlorotUniform, "big");
  const double bound = std::sqrt(6.0 / 120.0);
  EXPECT_LE(big.cwiseAbs().maxCoeff(), bound);
  EXPECT_GT(big.cwiseAbs().maxCoeff(), 0.9 * bound);
}

TEST(InitParamsTest, SchemesAndDeterminism) {
  EXPECT_EQ(InitParams(3, 2, 1, InitScheme::kZeros, "b"),
            Eigen::MatrixXd::Zero(3, 2));
  EXPECT_EQ(InitParams(3, 1, 1, InitScheme::kForgetBiasOne, "b_f"),
            Eigen::MatrixXd::Ones(3, 1));
  EXPECT_EQ(InitParams(5, 5, 9, InitScheme::kGlorotUniform, "x"),
            InitParams(5, 5, 9, InitScheme::kGlorotUniform, "x"));
  EXPECT_NE(InitParams(5, 5, 9, InitScheme::kGlorotUniform, "x"),
            InitParams(5, 5, 9, InitScheme::kGlorotUniform, "y"));
  EXPECT_NE(InitParams(5, 5, 9, InitScheme::kGlorotUniform, "x"),
            InitParams(5, 5, 10, InitScheme::kGlorotUniform, "x"));
  EXPECT_EQ(ParseInitScheme("glorot_uniform"), InitScheme::kGlorotUniform);
  EXPECT_EQ(ParseInitScheme("zeros"), InitScheme::kZeros);
  EXPECT_EQ(ParseInitScheme("forget_bias_one"), InitScheme::kForgetBiasOne);
  EXPECT_THROW(ParseInitScheme("he_normal"), std::invalid_argument);
}

TEST(ParameterSetTest, NamesAreUnique) {
  ParameterSet params;
  params.Add("a", Eigen::MatrixXd::Zero(1, 1));
  EXPECT_THROW(params.Add("a", Eigen::MatrixXd::Zero(1, 1)),
               std::invalid_argument);
  EXPECT_EQ(params.Find("missing"), nullptr);
  EXPECT_THROW(params.Get("missing"), std::out_of_range);
  EXPECT_EQ(params.Get("a").grad.rows(), 1);
}

TEST(LstmLayerTest, ParametersAndForgetBias) {
  ParameterSet params;
  AddLstmCellParams(params, "cell", 5, 3, 1);
  EXPECT_EQ(params.size(), 12u);
  EXPECT_EQ(params.Get("cell.W_i").value.rows(), 3);
  EXPECT_EQ(params.Get("cell.W_i").value.cols(), 5);
  EXPECT_EQ(params.Get("cell.U_g").value.cols(), 3);
  EXPECT_EQ(params.Get("cell.b_f").value, Eigen::MatrixXd::Ones(3, 1));
  EXPECT_EQ(params.Get("cell.b_i").value, Eigen::MatrixXd::Zero(3, 1));
}

TEST(LstmLayerTest, TapeMatchesFunctional) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterSet params;
    AddLstmCellParams(params, "cell", 4, 3, trial);
    const Eigen::MatrixXd seq = RandomMatrix(rng, 1 + trial % 6, 4);
    for (bool reverse : {false, true}) {
      Tape tape;
      auto states = LstmSequence(BindLstmCell(tape, params, "cell"),
                                 Columns(tape, seq), reverse);
      const Matrix<double> expected =
          LstmForward<double>(seq, ExtractLstmCell(params, "cell"), reverse);
      for (Eigen::Index t = 0; t < seq.rows(); ++t) {
        ASSERT_LT((states[t].value().col(0) - expected.row(t).transpose())
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-14);
      }
    }
  }
}

TEST(LstmLayerTest, GradCheck) {
  ParameterSet params;
  AddLstmCellParams(params, "cell", 4, 3, 2);
  Rng rng(2);
  const Eigen::MatrixXd seq = RandomMatrix(rng, 4, 4);
  auto f = [&](Tape &t) {
    auto fwd = LstmSequence(BindLstmCell(t, params, "cell"), Columns(t, seq),
                            true);
    std::vector<Var> terms;
    for (std::size_t i = 0; i < fwd.size(); ++i) {
      terms.push_back(SoftmaxCrossEntropy(fwd[i], i % 3));
    }
    return Sum(terms);
  };
  EXPECT_LT(GradCheck(f, params).max_relative_error, 1e-4);
}

TEST(AttentionLayerTest, TapeMatchesFunctional) {
  Rng rng(3);
  ParameterSet params;
  AddAttentionParams(params, "att", 4, 6, 5, 3);
  EXPECT_EQ(params.Get("att.v").value.cols(), 1);
  const Eigen::MatrixXd queries = RandomMatrix(rng, 3, 4);
  const Eigen::MatrixXd keys = RandomMatrix(rng, 5, 6);
  const auto expected = neural::Attend<double>(
      queries, keys, ExtractAttention(params, "att"));
  Tape tape;
  auto att = BindAttention(tape, params, "att");
  Var key_cols = tape.Constant(keys.transpose());
  Var projected = ProjectKeys(att, key_cols);
  for (Eigen::Index q = 0; q < 3; ++q) {
    auto r = neural::Attend(att, tape.Constant(queries.row(q).transpose()),
                            key_cols, projected);
    EXPECT_LT((r.weights.value().row(0) - expected.weights.row(q))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    EXPECT_LT((r.context.value().col(0) - expected.contexts.row(q).transpose())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
    EXPECT_NEAR(r.weights.value().sum(), 1.0, 1e-9);
  }
}

TEST(AttentionLayerTest, GradCheck) {
  Rng rng(4);
  ParameterSet params;
  AddAttentionParams(params, "att", 3, 3, 4, 4);
  params.Add("keys", RandomMatrix(rng, 3, 5));
  params.Add("query", RandomMatrix(rng, 3, 1));
  auto f = [&](Tape &t) {
    auto att = BindAttention(t, params, "att");
    Var keys = t.Param(params.Get("keys"));
    auto r = neural::Attend(att, t.Param(params.Get("query")), keys,
                            ProjectKeys(att, keys));
    return SoftmaxCrossEntropy(r.context, 1);
  };
  EXPECT_LT(GradCheck(f, params).max_relative_error, 1e-4);
}

TEST(HighwayLayerTest, GateBiasAndFunctionalMatch) {
  ParameterSet params;
  AddHighwayParams(params, "hw", 4, 5);
  EXPECT_EQ(params.Get("hw.b_T").value,
            Eigen::MatrixXd::Constant(4, 1, kHighwayGateBias));
  EXPECT_EQ(params.Get("hw.b_H").value, Eigen::MatrixXd::Zero(4, 1));
  Rng rng(5);
  const Eigen::VectorXd x = RandomMatrix(rng, 4, 1);
  Tape tape;
  Var y = Highway(BindHighway(tape, params, "hw"), tape.Constant(x));
  const Vector<double> expected =
      neural::Highway<double>(x, ExtractHighway(params, "hw"));
  EXPECT_LT((y.value().col(0) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HighwayLayerTest, GradCheck) {
  Rng rng(6);
  ParameterSet params;
  AddHighwayParams(params, "hw", 4, 6);
  params.Add("x", RandomMatrix(rng, 4, 1));
  auto f = [&](Tape &t) {
    return SoftmaxCrossEntropy(
        Highway(BindHighway(t, params, "hw"), t.Param(params.Get("x"))), 2);
  };
  EXPECT_LT(GradCheck(f, params).max_relative_error, 1e-4);
}

TEST(AffineLayerTest, ComputesWxPlusB) {
  ParameterSet params;
  AddAffineParams(params, "out", 3, 2, 7);
  EXPECT_EQ(params.Get("out.b").value, Eigen::MatrixXd::Zero(2, 1));
  params.Get("out.b").value << 0.5, -0.5;
  Rng rng(7);
  const Eigen::VectorXd x = RandomMatrix(rng, 3, 1);
  Tape tape;
  Var y = Affine(BindAffine(tape, params, "out"), tape.Constant(x));
  const Eigen::VectorXd expected =
      params.Get("out.W").value * x + params.Get("out.b").value;
  EXPECT_LT((y.value().col(0) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace framelstm::neural
