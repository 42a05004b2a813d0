// Copyright 2026 The ornn Authors.
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

#include "ornn/model.h"

#include <cmath>

#include <gtest/gtest.h>

#include "ornn/error.h"
#include "ornn/optimizer.h"
#include "ornn/tasks.h"
#include "test_util.h"

namespace ornn {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(LeakyReluTest, Examples) {
  EXPECT_TRUE(Near(LeakyRelu(Vec({10, -10, 0})), Vec({10, -1, 0}), 0.0));
  // Subgradient 1 at zero.
  EXPECT_TRUE(Near(ActivationBackward(Activation::kLeakyRelu, Vec({0, -2, 3}),
                                      Vec({1, 1, 1}), VectorXd(), nullptr),
                   Vec({1, 0.1, 1}), 0.0));
}

TEST(ActivationTest, ParseAndName) {
  for (Activation a : {Activation::kLeakyRelu, Activation::kModReluReal,
                       Activation::kIdentity}) {
    EXPECT_EQ(ParseActivation(ActivationName(a)), a);
  }
  EXPECT_THROW(ParseActivation("tanh"), FormatError);
}

TEST(ActivationTest, ModReluJacobianMatchesFiniteDifferences) {
  Rng rng(1);
  const VectorXd pre = RandomVec(6, rng);
  const VectorXd bias = Vec({-0.2, 0.3, 0.1});
  const VectorXd g = RandomVec(6, rng);
  VectorXd grad_bias = VectorXd::Zero(3);
  const VectorXd analytic = ActivationBackward(Activation::kModReluReal, pre, g,
                                               bias, &grad_bias);
  const double eps = 1e-6;
  for (int i = 0; i < 6; ++i) {
    VectorXd plus = pre, minus = pre;
    plus[i] += eps;
    minus[i] -= eps;
    const double fd =
        g.dot(Activate(Activation::kModReluReal, plus, bias) -
              Activate(Activation::kModReluReal, minus, bias)) /
        (2 * eps);
    EXPECT_NEAR(analytic[i], fd, 1e-8);
  }
  for (int k = 0; k < 3; ++k) {
    VectorXd plus = bias, minus = bias;
    plus[k] += eps;
    minus[k] -= eps;
    const double fd = g.dot(Activate(Activation::kModReluReal, pre, plus) -
                            Activate(Activation::kModReluReal, pre, minus)) /
                      (2 * eps);
    EXPECT_NEAR(grad_bias[k], fd, 1e-8);
  }
}

OrnnParams SmallParams(int n, int m, Activation act, Rng& rng) {
  OrnnParams p = InitOrnnParams(n, m, 3, 2, act, rng);
  p.hidden_bias = RandomVec(n, rng);
  return p;
}

TEST(CellForwardTest, SpecialCases) {
  Rng rng(2);
  OrnnParams p = SmallParams(8, 4, Activation::kIdentity, rng);
  const ReflectionStack s = p.stack();
  const VectorXd h = RandomVec(8, rng);
  const VectorXd x = RandomVec(3, rng);
  OrnnParams linear = p;
  linear.v.setZero();
  linear.hidden_bias.setZero();
  EXPECT_TRUE(Near(CellForward(linear, s, h, x).h, ChainMatvec(s, h), 0.0));

  OrnnParams leaky = SmallParams(8, 4, Activation::kLeakyRelu, rng);
  const CellOutput from_zero =
      CellForward(leaky, leaky.stack(), VectorXd::Zero(8), x);
  EXPECT_TRUE(Near(from_zero.h, LeakyRelu(leaky.v * x + leaky.hidden_bias),
                   1e-15));
}

TEST(CellForwardTest, MatchesDenseReferenceAndSrnn) {
  Rng rng(3);
  for (Activation act : {Activation::kLeakyRelu, Activation::kModReluReal,
                         Activation::kIdentity}) {
    OrnnParams p = SmallParams(8, 4, act, rng);
    if (act == Activation::kModReluReal) p.modrelu_bias = RandomVec(4, rng);
    const ReflectionStack s = p.stack();
    const MatrixXd w = Materialize(s);
    const VectorXd h = RandomVec(8, rng);
    const VectorXd x = RandomVec(3, rng);
    const CellOutput cell = CellForward(p, s, h, x);
    const VectorXd pre = w * h + p.v * x + p.hidden_bias;
    EXPECT_TRUE(Near(cell.pre, pre, 1e-13));
    EXPECT_TRUE(Near(cell.h, Activate(act, pre, p.modrelu_bias), 1e-12));
    EXPECT_TRUE(Near(SrnnCell(w, p, h, x).h, cell.h, 1e-12));
  }
}

TEST(SrnnCellTest, IdentityTransitionAndFlops) {
  Rng rng(4);
  OrnnParams p = SmallParams(5, 2, Activation::kIdentity, rng);
  p.v.setZero();
  p.hidden_bias.setZero();
  const VectorXd h = RandomVec(5, rng);
  FlopCounter counter;
  EXPECT_TRUE(Near(SrnnCell(MatrixXd::Identity(5, 5), p, h, RandomVec(3, rng),
                            &counter)
                       .h,
                   h, 0.0));
  EXPECT_EQ(counter.total(), DenseForwardFlops(5));
  FlopCounter back;
  MatrixXd grad_w;
  DenseBackward(MatrixXd::Identity(5, 5), h, h, &grad_w, &back);
  EXPECT_EQ(back.total(), DenseBackwardFlops(5));
  EXPECT_TRUE(Near(grad_w, h * h.transpose(), 0.0));
}

TEST(LossTest, Examples) {
  const MatrixXd t = RandomMat(2, 5, *std::make_unique<Rng>(5));
  EXPECT_EQ(MeanSquaredError(t, t), 0.0);
  EXPECT_EQ(NormalisedMse(t, t), 0.0);
  EXPECT_THROW(MeanSquaredError(MatrixXd(0, 0), MatrixXd(0, 0)), ShapeError);
  // Zero predictor against a mean-zero target scores 1.
  const MatrixXd centred = t.array() - t.mean();
  EXPECT_NEAR(NormalisedMse(MatrixXd::Zero(2, 5), centred), 1.0, 1e-14);
  // Uniform 2-class predictions cost ln 2 per sample.
  EXPECT_NEAR(CrossEntropy(MatrixXd::Zero(2, 4), {0, 1, 1, 0}), std::log(2.0),
              1e-15);
  EXPECT_THROW(CrossEntropy(MatrixXd::Zero(2, 1), {2}), ShapeError);
  EXPECT_NEAR(Softmax(Vec({1000, 1000})).sum(), 1.0, 1e-15);
}

TEST(LossTest, ConstantPredictorOnAddition) {
  TaskSpec spec;
  spec.batch = 20000;
  spec.length = 10;
  Rng rng(6);
  const TaskBatch batch = GenerateAddition(spec, rng);
  MatrixXd targets(1, batch.size());
  for (int s = 0; s < batch.size(); ++s) targets(0, s) = batch.targets[s](0, 0);
  EXPECT_NEAR(MeanSquaredError(MatrixXd::Ones(1, batch.size()), targets),
              1.0 / 6.0, 0.005);
}

TEST(InitTest, ShapesRangesAndSigns) {
  Rng rng(7);
  const OrnnParams p = InitOrnnParams(10, 10, 4, 3, Activation::kModReluReal, rng);
  EXPECT_NO_THROW(CheckShapes(p));
  EXPECT_EQ(p.u.cols(), 9);
  EXPECT_TRUE(p.u1 == 1.0 || p.u1 == -1.0);
  EXPECT_LE(p.u.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(p.v.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 14.0));
  EXPECT_LE(p.y.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 13.0));
  EXPECT_EQ(p.hidden_bias.norm(), 0.0);
  EXPECT_EQ(p.modrelu_bias.size(), 5);
  EXPECT_THROW(InitOrnnParams(5, 2, 1, 1, Activation::kModReluReal, rng),
               ShapeError);
  EXPECT_THROW(InitOrnnParams(5, 6, 1, 1, Activation::kIdentity, rng),
               ShapeError);
}

}  // namespace
}  // namespace ornn
