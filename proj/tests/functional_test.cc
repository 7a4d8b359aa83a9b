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
#include "framelstm/neural/functional.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "framelstm/random.h"
#include "oracles.h"

namespace framelstm::neural {
namespace {

using namespace oracle;  // NOLINT

TEST(OracleTest, LstmCellMatchesOn100Instances) {
  EXPECT_LT(LstmCellSweep(100, 100), kOracleTolerance);
}

TEST(OracleTest, BiLstmMatchesOn100Instances) {
  EXPECT_LT(BiLstmSweep(100, 200), kOracleTolerance);
}

TEST(OracleTest, AttentionMatchesOn100Instances) {
  EXPECT_LT(AttentionSweep(100, 300), kOracleTolerance);
}

TEST(OracleTest, HighwayMatchesOn100Instances) {
  EXPECT_LT(HighwaySweep(100, 400), kOracleTolerance);
}

TEST(OracleTest, SoftmaxCrossEntropyMatchesOn100Instances) {
  EXPECT_LT(SoftmaxCrossEntropySweep(100, 500), kOracleTolerance);
}


TEST(LstmCellTest, ZeroEverythingGivesZero) {
  LstmCellParams<double> p;
  for (auto *w : {&p.W_i, &p.W_f, &p.W_o, &p.W_g}) w->setZero(2, 3);
  for (auto *u : {&p.U_i, &p.U_f, &p.U_o, &p.U_g}) u->setZero(2, 2);
  for (auto *b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) b->setZero(2);
  auto s = LstmCellForward<double>(Vector<double>::Zero(3),
                                   Vector<double>::Zero(2),
                                   Vector<double>::Zero(2), p);
  EXPECT_EQ(s.h, Vector<double>::Zero(2));
  EXPECT_EQ(s.c, Vector<double>::Zero(2));
}

TEST(LstmCellTest, CarriedCellAnalytic) {
  LstmCellParams<double> p;
  for (auto *w : {&p.W_i, &p.W_f, &p.W_o, &p.W_g}) w->setZero(1, 1);
  for (auto *u : {&p.U_i, &p.U_f, &p.U_o, &p.U_g}) u->setZero(1, 1);
  for (auto *b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) b->setZero(1);
  Vector<double> c(1);
  c << 1.0;
  auto s = LstmCellForward<double>(Vector<double>::Zero(1),
                                   Vector<double>::Zero(1), c, p);
  EXPECT_NEAR(s.c[0], 0.5, 1e-15);
  EXPECT_NEAR(s.h[0], 0.5 * std::tanh(0.5), 1e-15);
  EXPECT_NEAR(s.h[0], 0.231059, 1e-6);
}

TEST(LstmCellTest, DimensionMismatchThrows) {
  Rng rng(1);
  const auto p = RandomLstm(rng, 3, 2).ToParams();
  EXPECT_THROW(LstmCellForward<double>(Vector<double>::Zero(4),
                                       Vector<double>::Zero(2),
                                       Vector<double>::Zero(2), p),
               DimensionError);
  auto bad = p;
  bad.U_f.resize(2, 3);
  EXPECT_THROW(bad.Validate(), DimensionError);
}




TEST(BiLstmTest, SingleStepIsTwoCellApplications) {
  Rng rng(3);
  const auto fwd = RandomLstm(rng, 4, 3).ToParams();
  const auto bwd = RandomLstm(rng, 4, 3).ToParams();
  const Matrix<double> seq = ToEigen(RandomMat(rng, 1, 4));
  const Vector<double> x = seq.row(0).transpose();
  const Vector<double> z = Vector<double>::Zero(3);
  const auto a = LstmCellForward<double>(x, z, z, fwd);
  const auto b = LstmCellForward<double>(x, z, z, bwd);
  const Matrix<double> out = BiLstmForward<double>(seq, fwd, bwd);
  EXPECT_EQ(Vector<double>(out.row(0).head(3).transpose()), a.h);
  EXPECT_EQ(Vector<double>(out.row(0).tail(3).transpose()), b.h);
}

TEST(BiLstmTest, PalindromeSymmetry) {
  Rng rng(4);
  const auto p = RandomLstm(rng, 3, 2).ToParams();
  Mat seq = RandomMat(rng, 5, 3);
  seq[3] = seq[1];
  seq[4] = seq[0];
  const Matrix<double> out = BiLstmForward<double>(ToEigen(seq), p, p);
  for (int t = 0; t < 5; ++t) {
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(out(t, k), out(4 - t, 2 + k), 1e-15);
    }
  }
}

TEST(BiLstmTest, EmptySequenceThrows) {
  Rng rng(5);
  const auto p = RandomLstm(rng, 3, 2).ToParams();
  EXPECT_THROW(BiLstmForward<double>(Matrix<double>(0, 3), p, p),
               DimensionError);
}



TEST(AttentionTest, IdenticalKeysGiveUniformWeights) {
  Rng rng(6);
  const AttentionParams<double> p{ToEigen(RandomMat(rng, 3, 2)),
                                  ToEigen(RandomMat(rng, 3, 4)),
                                  ToEigen(RandomVec(rng, 3))};
  const Vec key = RandomVec(rng, 4);
  const Mat keys(5, key);
  const auto r =
      Attend<double>(ToEigen(RandomMat(rng, 2, 2)), ToEigen(keys), p);
  for (int q = 0; q < 2; ++q) {
    for (int t = 0; t < 5; ++t) EXPECT_NEAR(r.weights(q, t), 0.2, 1e-15);
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(r.contexts(q, c), key[c], 1e-15);
  }
}

TEST(AttentionTest, SingleKey) {
  Rng rng(7);
  const AttentionParams<double> p{ToEigen(RandomMat(rng, 3, 2)),
                                  ToEigen(RandomMat(rng, 3, 2)),
                                  ToEigen(RandomVec(rng, 3))};
  const Matrix<double> key = ToEigen(RandomMat(rng, 1, 2));
  const auto r = Attend<double>(ToEigen(RandomMat(rng, 1, 2)), key, p);
  EXPECT_EQ(r.weights(0, 0), 1.0);
  EXPECT_EQ(r.contexts, key);
}

TEST(AttentionTest, MismatchThrows) {
  Rng rng(8);
  const AttentionParams<double> p{ToEigen(RandomMat(rng, 3, 2)),
                                  ToEigen(RandomMat(rng, 3, 2)),
                                  ToEigen(RandomVec(rng, 3))};
  EXPECT_THROW(Attend<double>(ToEigen(RandomMat(rng, 1, 3)),
                              ToEigen(RandomMat(rng, 2, 2)), p),
               DimensionError);
}



TEST(HighwayTest, CarryLimit) {
  Rng rng(9);
  const int n = 6;
  const Vector<double> x = ToEigen(RandomVec(rng, n));
  HighwayParams<double> p{ToEigen(RandomMat(rng, n, n)),
                          ToEigen(RandomVec(rng, n)),
                          Matrix<double>::Zero(n, n),
                          Vector<double>::Constant(n, -50.0)};
  EXPECT_LT((Highway<double>(x, p) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HighwayTest, ZeroWeightsHalveInput) {
  const Vector<double> x = Vector<double>::LinSpaced(4, -1.0, 2.0);
  HighwayParams<double> p{Matrix<double>::Zero(4, 4), Vector<double>::Zero(4),
                          Matrix<double>::Zero(4, 4), Vector<double>::Zero(4)};
  EXPECT_LT((Highway<double>(x, p) - 0.5 * x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HighwayTest, NonSquareThrows) {
  HighwayParams<double> p{Matrix<double>::Zero(3, 4), Vector<double>::Zero(3),
                          Matrix<double>::Zero(3, 4), Vector<double>::Zero(3)};
  EXPECT_THROW(Highway<double>(Vector<double>::Zero(4), p), DimensionError);
}

TEST(SoftmaxTest, Examples) {
  EXPECT_NEAR(Softmax<double>(Vector<double>::Zero(2))[0], 0.5, 1e-15);
  Vector<double> z(2);
  z << std::log(2.0), 0.0;
  const Vector<double> p = Softmax<double>(z);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(SoftmaxTest, ShiftInvariantAndNormalized) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector<double> z =
        ToEigen(RandomVec(rng, 1 + UniformIndex(rng, 9), 5));
    const Vector<double> p = Softmax<double>(z);
    const Vector<double> shifted =
        Softmax<double>((z.array() + 1000.0).matrix());
    EXPECT_LT((p - shifted).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.sum(), 1.0, 1e-9);
    EXPECT_GT(p.minCoeff(), 0.0);
    for (int i = 0; i + 1 < z.size(); ++i) {
      EXPECT_EQ(z[i] < z[i + 1], p[i] < p[i + 1]);
    }
  }
}


TEST(CrossEntropyTest, Examples) {
  Vector<double> one_hot = Vector<double>::Zero(4);
  one_hot[2] = 1.0;
  EXPECT_EQ(CrossEntropy<double>(one_hot, 2), 0.0);
  EXPECT_NEAR(CrossEntropy<double>(Vector<double>::Constant(16, 1.0 / 16), 3),
              2.772589, 1e-6);
  Vector<double> p(2);
  p << 0.25, 0.75;
  EXPECT_NEAR(CrossEntropy<double>(p, 0), 1.386294, 1e-6);
  EXPECT_NEAR(CrossEntropy<double>(one_hot, 0), -std::log(1e-12), 1e-9);
  EXPECT_THROW(CrossEntropy<double>(p, 2), DimensionError);
  EXPECT_THROW(CrossEntropy<double>(p, -1), DimensionError);
}

TEST(PrecisionTest, TemplatedOnScalar) {
  Vector<long double> z(3);
  z << 1.0L, 2.0L, 3.0L;
  EXPECT_NEAR(static_cast<double>(Softmax<long double>(z).sum()), 1.0, 1e-15);
  Vector<float> zf(2);
  zf << 0.0f, 0.0f;
  EXPECT_FLOAT_EQ(Softmax<float>(zf)[1], 0.5f);
}

}  // namespace
}  // namespace framelstm::neural
