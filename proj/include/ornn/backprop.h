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

#ifndef ORNN_BACKPROP_H_
#define ORNN_BACKPROP_H_

#include <Eigen/Dense>

#include "ornn/flops.h"
#include "ornn/householder.h"

namespace ornn {

// Gradients of a scalar loss through C = W h for one step.
struct GradientBundle {
  Eigen::MatrixXd du;       // same shape as stack.u(); structural zeros are 0.0
  double du1 = 0.0;         // u1 is a fixed sign and never receives gradient
  Eigen::VectorXd dh;       // dL/dh
  Eigen::VectorXd c_tilde;  // per-reflection backward coefficients
};

// Backward half of the fused kernel. Walks the reflections in forward order,
// peeling them off the running gradient g, and writes column k of dU as
//   -h_tilde(k) g - c_tilde(k) H(:, k+1)
// with g already updated by reflection k. Costs (7n - 2m + 3) m flops for
// m < n, plus one flop for the sign factor when m == n.
GradientBundle ChainBackward(const ReflectionStack& stack,
                             const ForwardTape& tape,
                             const Eigen::VectorXd& grad_c,
                             FlopCounter* counter = nullptr);

struct LocalStep {
  Eigen::VectorXd c;
  GradientBundle grads;
  ForwardTape tape;
};

// One-step forward and backward propagation through the chain:
// C = W h_prev, dL/dU and dL/dh_prev given dL/dC.
LocalStep LocalFpBp(const ReflectionStack& stack, const Eigen::VectorXd& h_prev,
                    const Eigen::VectorXd& grad_c,
                    FlopCounter* counter = nullptr);

// The same gradients from the dense closed form
//   dU = U[(h~ c~') o B' + (c~ h~') o B] - dL/dC h~' - h c~'
//   dh = dL/dC - U c~
// with h~ = T^{-1} U' h and c~ = T'^{-1} U' dL/dC from triangular solves.
// Only defined for m < n; throws UnsupportedRegime otherwise.
GradientBundle GradFormulas(const ReflectionStack& stack,
                            const Eigen::VectorXd& h,
                            const Eigen::VectorXd& grad_c);

inline constexpr double kDefaultFiniteDiffStep = 1e-6;

// Central differences of L = grad_c' W(U) h over every non-structural entry of
// U and every entry of h. u1 is held fixed.
GradientBundle FiniteDiffGrad(const ReflectionStack& stack,
                              const Eigen::VectorXd& h,
                              const Eigen::VectorXd& grad_c,
                              double eps = kDefaultFiniteDiffStep);

// Sets the strictly upper triangular part of a gradient to exactly zero.
void ZeroStructuralEntries(Eigen::MatrixXd& du);

}  // namespace ornn

#endif  // ORNN_BACKPROP_H_
