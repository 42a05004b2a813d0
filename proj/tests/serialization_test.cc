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

#include "ornn/serialization.h"

#include <sstream>

#include <gtest/gtest.h>

#include "ornn/error.h"
#include "test_util.h"

namespace ornn {
namespace {

using Eigen::MatrixXd;

TEST(StackIoTest, RoundTripIsBitExact) {
  Rng rng(11);
  for (auto [n, m] : {std::pair{5, 1}, {5, 3}, {5, 5}, {1, 1}, {16, 16}}) {
    const ReflectionStack stack = RandomStack(n, m, rng);
    std::stringstream buf;
    WriteStack(buf, stack);
    const ReflectionStack back = ReadStack(buf);
    EXPECT_EQ(back.n(), n);
    EXPECT_EQ(back.m(), m);
    EXPECT_EQ(back.u1(), stack.u1());
    EXPECT_EQ(back.u(), stack.u());
  }
}

TEST(StackIoTest, RejectsBadInput) {
  std::stringstream bad("NOPE1 and more bytes than needed here");
  EXPECT_THROW(ReadStack(bad), FormatError);
  Rng rng(12);
  std::stringstream buf;
  WriteStack(buf, RandomStack(6, 3, rng));
  const std::string bytes = buf.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 4));
  EXPECT_THROW(ReadStack(cut), FormatError);
}

TEST(MatrixIoTest, BinaryAndTextRoundTrips) {
  Rng rng(13);
  const MatrixXd a = RandomMat(4, 7, rng);
  std::stringstream bin;
  WriteMatrix(bin, a);
  EXPECT_EQ(ReadMatrix(bin), a);

  std::stringstream text;
  WriteTextMatrix(text, a);
  EXPECT_EQ(ReadTextMatrix(text), a);

  std::stringstream commented("# header\n1 2\n\n3 4\n");
  MatrixXd expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(ReadTextMatrix(commented), expected);

  std::stringstream ragged("1 2\n3\n");
  EXPECT_THROW(ReadTextMatrix(ragged), FormatError);
}

TEST(MatrixIoTest, ComplexVectorRoundTrip) {
  Eigen::VectorXcd z(3);
  z << std::complex<double>(1.5, -2.0), std::complex<double>(0.1, 0.2),
      std::complex<double>(-3.0, 0.0);
  std::stringstream buf;
  WriteTextComplexVector(buf, z);
  EXPECT_EQ(ParseTextComplexVector(buf.str()), z);
  EXPECT_THROW(ParseTextComplexVector("1 2 3"), FormatError);
}

TEST(CheckpointTest, RoundTripKeepsParamsAndMoments) {
  Rng rng(14);
  for (Activation act : {Activation::kLeakyRelu, Activation::kModReluReal}) {
    OrnnParams p = InitOrnnParams(6, 6, 2, 3, act, rng);
    p.hidden_bias = RandomVec(6, rng);
    if (act == Activation::kModReluReal) p.modrelu_bias = RandomVec(3, rng);
    AdamState adam = AdamState::ZerosLike(p);
    adam.step = 17;
    for (AdamMoments& mo : adam.moments) {
      mo.first.setRandom();
      mo.second = mo.first.square();
    }
    std::stringstream buf;
    WriteCheckpoint(buf, p, adam);
    const Checkpoint back = ReadCheckpoint(buf);
    EXPECT_EQ(back.params.n, 6);
    EXPECT_EQ(back.params.m, 6);
    EXPECT_EQ(back.params.activation, act);
    EXPECT_EQ(back.params.u, p.u);
    EXPECT_EQ(back.params.u1, p.u1);
    EXPECT_EQ(back.params.v, p.v);
    EXPECT_EQ(back.params.y, p.y);
    EXPECT_EQ(back.params.hidden_bias, p.hidden_bias);
    EXPECT_EQ(back.params.output_bias, p.output_bias);
    EXPECT_EQ(back.params.modrelu_bias, p.modrelu_bias);
    EXPECT_EQ(back.adam.step, 17);
    ASSERT_EQ(back.adam.moments.size(), adam.moments.size());
    for (std::size_t i = 0; i < adam.moments.size(); ++i) {
      EXPECT_TRUE((back.adam.moments[i].first == adam.moments[i].first).all());
      EXPECT_TRUE((back.adam.moments[i].second == adam.moments[i].second).all());
    }
  }
}

TEST(ReferenceIoTest, WriteReadRoundTrip) {
  Rng rng(15);
  ReferenceCase rc;
  rc.u = RandomMat(4, 2, rng);
  rc.u(0, 1) = 0.0;
  rc.h = RandomVec(4, rng);
  rc.grad_c = RandomVec(4, rng);
  rc.c = RandomVec(4, rng);
  rc.g = RandomVec(4, rng);
  rc.du = RandomMat(4, 2, rng);
  std::stringstream buf;
  WriteReferenceCases(buf, {rc, rc});
  const auto back = ReadReferenceCases(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].u, rc.u);
  EXPECT_EQ(back[1].du, rc.du);
  EXPECT_EQ(back[0].g, rc.g);
  EXPECT_GE(LoadReferenceCases(DataPath("reference_vectors.txt")).size(), 10u);
}

}  // namespace
}  // namespace ornn
