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

#include "ornn/tasks.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ornn/error.h"
#include "test_util.h"

namespace ornn {
namespace {

using Eigen::MatrixXd;

TEST(AdditionTest, MarkersAndTargets) {
  TaskSpec spec;
  spec.length = 9;
  spec.batch = 200;
  Rng rng(1);
  const TaskBatch b = GenerateAddition(spec, rng);
  EXPECT_NO_THROW(CheckBatch(b));
  EXPECT_EQ(b.input_dim, 2);
  EXPECT_TRUE(b.last_step_only);
  const int half = 9 / 2;
  for (int s = 0; s < b.size(); ++s) {
    const MatrixXd& x = b.inputs[s];
    int first = -1, second = -1, count = 0;
    for (int t = 0; t < 9; ++t) {
      EXPECT_GE(x(0, t), 0.0);
      EXPECT_LT(x(0, t), 1.0);
      if (x(1, t) == 1.0) {
        ++count;
        (first < 0 ? first : second) = t;
      } else {
        EXPECT_EQ(x(1, t), 0.0);
      }
    }
    ASSERT_EQ(count, 2);
    EXPECT_LT(first, half);
    EXPECT_GE(second, half);
    EXPECT_EQ(b.targets[s](0, 0), x.row(0).dot(x.row(1)));
    EXPECT_GE(b.targets[s](0, 0), 0.0);
    EXPECT_LE(b.targets[s](0, 0), 2.0);
  }
}

TEST(AdditionTest, ConstantPredictorBaseline) {
  TaskSpec spec;
  spec.length = 4;
  spec.batch = 100000;
  Rng rng(2);
  const TaskBatch b = GenerateAddition(spec, rng);
  double total = 0.0;
  for (const MatrixXd& y : b.targets) total += (y(0, 0) - 1.0) * (y(0, 0) - 1.0);
  EXPECT_NEAR(total / b.size(), 0.167, 0.005);
}

TEST(AdditionTest, RejectsShortSequences) {
  TaskSpec spec;
  spec.length = 3;
  Rng rng(3);
  EXPECT_THROW(GenerateAddition(spec, rng), FormatError);
}

TEST(CopyTest, MinimalLayout) {
  TaskSpec spec;
  spec.kind = TaskKind::kCopy;
  spec.symbols = 2;
  spec.payload = 1;
  spec.delay = 2;
  spec.batch = 5;
  Rng rng(4);
  const TaskBatch b = GenerateCopy(spec, rng);
  EXPECT_NO_THROW(CheckBatch(b));
  EXPECT_EQ(b.steps, 4);
  EXPECT_EQ(b.input_dim, 4);
  EXPECT_EQ(b.output_dim, 3);
  const int blank = 2, go = 3;
  for (int s = 0; s < b.size(); ++s) {
    std::vector<int> in;
    for (int t = 0; t < 4; ++t) {
      int hot = -1;
      b.inputs[s].col(t).maxCoeff(&hot);
      EXPECT_EQ(b.inputs[s].col(t).sum(), 1.0);
      in.push_back(hot);
    }
    const int symbol = in[0];
    EXPECT_LT(symbol, 2);
    EXPECT_EQ(in, (std::vector<int>{symbol, blank, go, blank}));
    EXPECT_EQ(b.labels[s], (std::vector<int>{blank, blank, blank, symbol}));
  }
}

TEST(CopyTest, PayloadMultisetsMatchAndBaseline) {
  TaskSpec spec;
  spec.kind = TaskKind::kCopy;
  spec.batch = 20;
  Rng rng(5);
  const TaskBatch b = GenerateCopy(spec, rng);
  EXPECT_EQ(b.steps, 2 * 10 + 20);
  for (int s = 0; s < b.size(); ++s) {
    std::vector<int> in, out;
    for (int t = 0; t < 10; ++t) {
      int hot = -1;
      b.inputs[s].col(t).maxCoeff(&hot);
      in.push_back(hot);
      out.push_back(b.labels[s][30 + t]);
    }
    EXPECT_EQ(in, out);
  }
  EXPECT_NEAR(CopyBaselineCrossEntropy(spec), 10 * std::log(8.0) / 40.0, 1e-15);
  spec.symbols = 1;
  EXPECT_THROW(GenerateCopy(spec, rng), FormatError);
}

TEST(WaveformTest, NormalisedSequences) {
  TaskSpec spec;
  spec.kind = TaskKind::kWaveform;
  spec.components = 1;
  Rng rng(6);
  const TaskBatch single = GenerateWaveform(spec, rng);
  EXPECT_EQ(single.steps, 800);
  EXPECT_EQ(single.size(), 1);
  EXPECT_NEAR(single.targets[0].cwiseAbs().maxCoeff(), 1.0, 1e-15);
  EXPECT_EQ(single.inputs[0](0, 0), 1.0);
  EXPECT_EQ(single.inputs[0].sum(), 1.0);

  spec.components = 4;
  spec.batch = 3;
  const TaskBatch mix = GenerateWaveform(spec, rng);
  for (const MatrixXd& y : mix.targets) {
    EXPECT_NEAR(y.mean(), 0.0, 1e-12);
    EXPECT_NEAR(y.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    // Zero predictor scores NMSE 1.
    const double var = (y.array() - y.mean()).square().mean();
    EXPECT_NEAR(y.squaredNorm() / y.size() / var, 1.0, 1e-12);
  }
}

TEST(GeneratorTest, SeedDeterminism) {
  for (TaskKind kind : {TaskKind::kAddition, TaskKind::kCopy, TaskKind::kWaveform}) {
    TaskSpec spec;
    spec.kind = kind;
    spec.seed = 42;
    const TaskBatch a = GenerateBatch(spec);
    const TaskBatch b = GenerateBatch(spec);
    ASSERT_EQ(a.size(), b.size());
    for (int s = 0; s < a.size(); ++s) {
      EXPECT_EQ(a.inputs[s], b.inputs[s]);
      if (!a.targets.empty()) EXPECT_EQ(a.targets[s], b.targets[s]);
      if (!a.labels.empty()) EXPECT_EQ(a.labels[s], b.labels[s]);
    }
    spec.seed = 43;
    const TaskBatch c = GenerateBatch(spec);
    if (kind == TaskKind::kWaveform) {
      EXPECT_NE(c.targets[0], a.targets[0]);
    } else {
      EXPECT_NE(c.inputs[0], a.inputs[0]);
    }
    EXPECT_EQ(ParseTaskKind(TaskName(kind)), kind);
  }
}

TEST(ResolveDefaultsTest, TaskDefaults) {
  TaskSpec spec;
  EXPECT_EQ(ResolveDefaults(spec).length, 100);
  EXPECT_EQ(ResolveDefaults(spec).batch, 50);
  spec.kind = TaskKind::kWaveform;
  EXPECT_EQ(ResolveDefaults(spec).length, 800);
  EXPECT_EQ(ResolveDefaults(spec).batch, 1);
  spec.batch = -1;
  EXPECT_THROW(ValidateTaskSpec(spec), FormatError);
}

}  // namespace
}  // namespace ornn
