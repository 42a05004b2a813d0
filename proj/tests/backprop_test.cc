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

#include "ornn/backprop.h"

#include <gtest/gtest.h>

#include "ornn/commands.h"
#include "ornn/error.h"
#include "ornn/serialization.h"
#include "test_util.h"

namespace ornn {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool StructuralZerosExact(const MatrixXd& du) {
  for (int c = 0; c < du.cols(); ++c) {
    for (int i = 0; i < c && i < du.rows(); ++i) {
      if (du(i, c) != 0.0) return false;
    }
  }
  return true;
}

TEST(LocalFpBpTest, ZeroUpstreamGradient) {
  Rng rng(1);
  const ReflectionStack s = RandomStack(9, 4, rng);
  const VectorXd h = RandomVec(9, rng);
  const LocalStep step = LocalFpBp(s, h, VectorXd::Zero(9));
  EXPECT_TRUE(Near(step.c, ChainMatvec(s, h), 0.0));
  EXPECT_TRUE(Near(step.grads.du, MatrixXd::Zero(9, 4), 0.0));
  EXPECT_TRUE(Near(step.grads.dh, VectorXd::Zero(9), 0.0));
  EXPECT_EQ(step.grads.du1, 0.0);
}

TEST(LocalFpBpTest, ZeroHiddenState) {
  Rng rng(2);
  for (int m : {3, 8}) {
    const ReflectionStack s = RandomStack(8, m, rng);
    const VectorXd gc = RandomVec(8, rng);
    const LocalStep step = LocalFpBp(s, VectorXd::Zero(8), gc);
    EXPECT_TRUE(Near(step.c, VectorXd::Zero(8), 0.0));
    EXPECT_TRUE(Near(step.grads.dh, Materialize(s).transpose() * gc, 1e-14));
    EXPECT_TRUE(Near(step.grads.du, MatrixXd::Zero(8, s.columns()), 0.0));
  }
}

TEST(LocalFpBpTest, MatchesOraclesOnRandomCase) {
  Rng rng(3);
  const ReflectionStack s = RandomStack(16, 8, rng);
  const VectorXd h = RandomVec(16, rng);
  const VectorXd gc = RandomVec(16, rng);
  const LocalStep step = LocalFpBp(s, h, gc);
  const GradientBundle dense = GradFormulas(s, h, gc);
  const GradientBundle fd = FiniteDiffGrad(s, h, gc);
  EXPECT_LT(ScaledError(step.grads.du, dense.du, 1e-300), 1e-11);
  EXPECT_LT(ScaledError(step.grads.dh, dense.dh, 1e-300), 1e-11);
  EXPECT_LT(ScaledError(step.grads.c_tilde, dense.c_tilde, 1e-300), 1e-11);
  EXPECT_LT(ScaledError(step.grads.du, fd.du, 1e-2), 1e-6);
  EXPECT_LT(ScaledError(step.grads.dh, fd.dh, 1e-2), 1e-6);
}

TEST(LocalFpBpTest, KernelMatchesFormulasOnHundredTriples) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(UniformInt(rng, 2, 32));
    const int m = static_cast<int>(UniformInt(rng, 1, n - 1));
    const ReflectionStack s = RandomStack(n, m, rng);
    const VectorXd h = RandomVec(n, rng);
    const VectorXd gc = RandomVec(n, rng);
    const LocalStep step = LocalFpBp(s, h, gc);
    const GradientBundle dense = GradFormulas(s, h, gc);
    EXPECT_LT(ScaledError(step.grads.du, dense.du, 1e-300), 1e-11)
        << "n=" << n << " m=" << m;
    EXPECT_LT(ScaledError(step.grads.dh, dense.dh, 1e-300), 1e-11);
    EXPECT_TRUE(StructuralZerosExact(step.grads.du));
    EXPECT_TRUE(StructuralZerosExact(dense.du));
  }
}

TEST(LocalFpBpTest, FiniteDifferencesIncludingFullChain) {
  Rng rng(5);
  for (int n : {2, 3, 6, 10}) {
    for (int m = 1; m <= n; ++m) {
      const ReflectionStack s = RandomStack(n, m, rng);
      const VectorXd h = RandomVec(n, rng);
      const VectorXd gc = RandomVec(n, rng);
      const LocalStep step = LocalFpBp(s, h, gc);
      const GradientBundle fd = FiniteDiffGrad(s, h, gc);
      EXPECT_LT(ScaledError(step.grads.du, fd.du, 1e-2), 1e-6)
          << "n=" << n << " m=" << m;
      EXPECT_LT(ScaledError(step.grads.dh, fd.dh, 1e-2), 1e-6);
      // Transpose identity.
      EXPECT_TRUE(Near(step.grads.dh, Materialize(s).transpose() * gc, 1e-12));
      EXPECT_TRUE(StructuralZerosExact(step.grads.du));
    }
  }
}

TEST(LocalFpBpTest, BackwardFlopsMatchClosedForm) {
  Rng rng(6);
  for (int n : {2, 9, 64}) {
    for (int m = 1; m < n; m += std::max(1, n / 7)) {
      const ReflectionStack s = RandomStack(n, m, rng);
      ForwardTape tape;
      ChainMatvec(s, RandomVec(n, rng), &tape);
      FlopCounter counter;
      ChainBackward(s, tape, RandomVec(n, rng), &counter);
      EXPECT_EQ(counter.total(), BackwardFlops(n, m));
    }
  }
  EXPECT_EQ(BackwardFlops(128, 16), 13872);
  EXPECT_EQ(RecomputeBackwardFlops(128, 16), 21840);
}

TEST(GradFormulasTest, SingleReflectionReducedForm) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial;
    const ReflectionStack s = RandomStack(n, 1, rng);
    const VectorXd u = s.u().col(0);
    const VectorXd h = RandomVec(n, rng);
    const VectorXd gc = RandomVec(n, rng);
    const double ht = 2.0 * u.dot(h) / u.squaredNorm();
    const double ct = 2.0 * u.dot(gc) / u.squaredNorm();
    const VectorXd expected = u * (ht * ct) - gc * ht - h * ct;
    EXPECT_TRUE(Near(GradFormulas(s, h, gc).du.col(0), expected, 1e-13));
    EXPECT_TRUE(Near(LocalFpBp(s, h, gc).grads.du.col(0), expected, 1e-13));
  }
}

TEST(GradFormulasTest, ZeroGradientAndRegimeCheck) {
  Rng rng(8);
  const ReflectionStack s = RandomStack(6, 3, rng);
  const GradientBundle zero = GradFormulas(s, RandomVec(6, rng), VectorXd::Zero(6));
  EXPECT_TRUE(Near(zero.du, MatrixXd::Zero(6, 3), 0.0));
  EXPECT_TRUE(Near(zero.dh, VectorXd::Zero(6), 0.0));
  EXPECT_THROW(GradFormulas(RandomStack(6, 6, rng), VectorXd::Ones(6),
                            VectorXd::Ones(6)),
               UnsupportedRegime);
}

TEST(GradFormulasTest, AgreesWithFiniteDifferences) {
  Rng rng(9);
  const ReflectionStack s = RandomStack(12, 6, rng);
  const VectorXd h = RandomVec(12, rng);
  const VectorXd gc = RandomVec(12, rng);
  const GradientBundle dense = GradFormulas(s, h, gc);
  const GradientBundle fd = FiniteDiffGrad(s, h, gc);
  EXPECT_LT(ScaledError(dense.du, fd.du, 1e-2), 1e-6);
}

TEST(FiniteDiffGradTest, ZeroGradientAndValidation) {
  Rng rng(10);
  const ReflectionStack s = RandomStack(5, 5, rng);
  const GradientBundle fd =
      FiniteDiffGrad(s, RandomVec(5, rng), VectorXd::Zero(5));
  EXPECT_TRUE(Near(fd.du, MatrixXd::Zero(5, 4), 0.0));
  EXPECT_THROW(FiniteDiffGrad(s, VectorXd::Ones(5), VectorXd::Ones(5), 0.0),
               PreconditionError);
}

TEST(ChainBackwardTest, RunningVectorEndsAsHiddenGradient) {
  // After the BP loop the running vector is dL/dh: compare with W' gC.
  Rng rng(11);
  const ReflectionStack s = RandomStack(20, 13, rng);
  ForwardTape tape;
  const VectorXd h = RandomVec(20, rng);
  ChainMatvec(s, h, &tape);
  const VectorXd gc = RandomVec(20, rng);
  const GradientBundle g = ChainBackward(s, tape, gc);
  EXPECT_TRUE(Near(g.dh, Materialize(s).transpose() * gc, 1e-13));
  EXPECT_THROW(ChainBackward(s, tape, VectorXd::Ones(3)), ShapeError);
}

TEST(ReferenceVectorsTest, KernelReproducesShippedVectors) {
  const std::vector<ReferenceCase> cases =
      LoadReferenceCases(DataPath("reference_vectors.txt"));
  ASSERT_GE(cases.size(), 10u);
  for (const ReferenceCase& rc : cases) {
    const ReflectionStack s(static_cast<int>(rc.u.cols()), rc.u);
    const LocalStep step = LocalFpBp(s, rc.h, rc.grad_c);
    MatrixXd expected_du = rc.du;
    ZeroStructuralEntries(expected_du);
    EXPECT_TRUE(Near(step.c, rc.c, 1e-12));
    EXPECT_TRUE(Near(step.grads.dh, rc.g, 1e-12));
    EXPECT_TRUE(Near(step.grads.du, expected_du, 1e-12));
  }
}

TEST(GradcheckCommandTest, DefaultSweepPassesAndFaultIsCaught) {
  GradcheckOptions options;
  options.sizes = {2, 4, 8};
  options.reference_path = DataPath("reference_vectors.txt");
  EXPECT_TRUE(RunGradcheck(options).passed());

  options.inject_fault = true;
  const GradcheckReport bad = RunGradcheck(options);
  EXPECT_FALSE(bad.passed());
  ASSERT_FALSE(bad.suites[0].failures.empty());
  EXPECT_NE(bad.suites[0].failures[0].find("n=2 m=1 seed=1"),
            std::string::npos);
}

}  // namespace
}  // namespace ornn
