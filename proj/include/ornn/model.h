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

#ifndef ORNN_MODEL_H_
#define ORNN_MODEL_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ornn/flops.h"
#include "ornn/householder.h"
#include "ornn/random.h"

namespace ornn {

enum class Activation { kLeakyRelu, kModReluReal, kIdentity };

Activation ParseActivation(std::string_view name);
std::string ActivationName(Activation activation);

// max(x / 10, x), elementwise.
Eigen::VectorXd LeakyRelu(const Eigen::VectorXd& x);

// Applies the activation. `modrelu_bias` is only read for kModReluReal and
// must then have half the length of `pre`.
Eigen::VectorXd Activate(Activation activation, const Eigen::VectorXd& pre,
                         const Eigen::VectorXd& modrelu_bias);

// Vector-Jacobian product of Activate at `pre`. Adds the bias gradient to
// `grad_bias` for kModReluReal. The leaky ReLU uses slope 1 at exactly 0;
// modReLU pairs sitting at the origin or in the dead zone pass no gradient.
Eigen::VectorXd ActivationBackward(Activation activation,
                                   const Eigen::VectorXd& pre,
                                   const Eigen::VectorXd& grad_out,
                                   const Eigen::VectorXd& modrelu_bias,
                                   Eigen::VectorXd* grad_bias);

// h_t = phi(W h_{t-1} + V x_t + b), o_t = Y h_t + c with W given by a
// reflection stack.
struct OrnnParams {
  int n = 0;
  int m = 0;
  int input_dim = 0;
  int output_dim = 0;
  Activation activation = Activation::kLeakyRelu;

  Eigen::MatrixXd u;  // n x ReflectionStack::StoredColumns(n, m)
  double u1 = 1.0;
  Eigen::MatrixXd v;  // n x input_dim
  Eigen::MatrixXd y;  // output_dim x n
  Eigen::VectorXd hidden_bias;
  Eigen::VectorXd output_bias;
  Eigen::VectorXd modrelu_bias;  // n / 2 entries for kModReluReal, else empty

  // Validated view of (u, u1).
  ReflectionStack stack() const { return ReflectionStack(m, u, u1); }
};

// Reflection entries ~ Uniform(-1, 1); V and Y ~ Uniform(-s, s) with
// s = sqrt(6 / (fan_in + fan_out)); u1 = +-1 with equal probability; all biases
// zero. modReLU needs an even n.
OrnnParams InitOrnnParams(int n, int m, int input_dim, int output_dim,
                          Activation activation, Rng& rng);

// Throws ShapeError when the tensors disagree with the declared sizes.
void CheckShapes(const OrnnParams& params);

struct CellOutput {
  Eigen::VectorXd h;    // activated state
  Eigen::VectorXd pre;  // W h_prev + V x + b
};

CellOutput CellForward(const OrnnParams& params, const ReflectionStack& stack,
                       const Eigen::VectorXd& h_prev, const Eigen::VectorXd& x,
                       ForwardTape* tape = nullptr,
                       FlopCounter* counter = nullptr);

// Dense W h with 2n^2 - n flops.
Eigen::VectorXd DenseMatvec(const Eigen::MatrixXd& w, const Eigen::VectorXd& h,
                            FlopCounter* counter = nullptr);

// Backward through C = W h for a dense W: returns W' g and accumulates the
// step's outer product g h' into *grad_w. Counts 3n^2 - n flops: n(2n - 1)
// for W'g and n^2 for g h'. Summing into *grad_w across steps is not counted,
// as with the fused kernel's dU.
Eigen::VectorXd DenseBackward(const Eigen::MatrixXd& w,
                              const Eigen::VectorXd& h,
                              const Eigen::VectorXd& g,
                              Eigen::MatrixXd* grad_w,
                              FlopCounter* counter = nullptr);

// Simple-RNN step with an unconstrained dense W, reusing V, biases and the
// activation from `params`.
CellOutput SrnnCell(const Eigen::MatrixXd& w, const OrnnParams& params,
                    const Eigen::VectorXd& h_prev, const Eigen::VectorXd& x,
                    FlopCounter* counter = nullptr);

Eigen::VectorXd OutputLayer(const OrnnParams& params, const Eigen::VectorXd& h);

enum class LossKind { kMse, kCrossEntropy };

std::string LossName(LossKind kind);

// Mean of squared differences over every entry. Throws ShapeError for empty
// or mismatched inputs.
double MeanSquaredError(const Eigen::MatrixXd& outputs,
                        const Eigen::MatrixXd& targets);

// MSE divided by the population variance of the targets.
double NormalisedMse(const Eigen::MatrixXd& outputs,
                     const Eigen::MatrixXd& targets);

// Mean over columns of -log softmax(logits(:, j))[labels[j]], in nats.
double CrossEntropy(const Eigen::MatrixXd& logits,
                    const std::vector<int>& labels);

// Numerically stable softmax of one logit vector.
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

}  // namespace ornn

#endif  // ORNN_MODEL_H_
