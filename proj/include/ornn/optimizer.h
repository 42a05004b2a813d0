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

#ifndef ORNN_OPTIMIZER_H_
#define ORNN_OPTIMIZER_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ornn/bptt.h"
#include "ornn/model.h"

namespace ornn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment estimates for one tensor.
struct AdamMoments {
  Eigen::ArrayXd first;
  Eigen::ArrayXd second;
};

// Bias-corrected Adam update of one flat tensor in place:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   x <- x - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// `step` is the 1-based update count.
void AdamUpdate(const AdamConfig& config, std::int64_t step,
                Eigen::Ref<Eigen::ArrayXd> param,
                const Eigen::Ref<const Eigen::ArrayXd>& grad,
                AdamMoments& moments);

// Optimizer state for OrnnParams: one moment pair per trainable tensor, in
// the order U, V, Y, hidden bias, output bias, modReLU bias.
struct AdamState {
  std::int64_t step = 0;
  std::vector<AdamMoments> moments;

  static AdamState ZerosLike(const OrnnParams& params);
  static const std::vector<std::string>& TensorNames();
};

// -1 if u1 <= 0, +1 otherwise.
inline double SnapSign(double u1) { return u1 <= 0.0 ? -1.0 : 1.0; }

// Forces the structural zeros of U to 0.0 and snaps u1 to +-1. Throws
// DegenerateParameter if a reflection vector's squared norm dropped below
// kMinSquaredNorm.
void ProjectConstraints(OrnnParams& params);

// One Adam step on every trainable tensor followed by ProjectConstraints.
// Throws NumericalFailure naming the tensor if any gradient entry is not
// finite; nothing is modified in that case.
void AdamStep(OrnnParams& params, const ModelGradients& grads, AdamState& state,
              const AdamConfig& config);

}  // namespace ornn

#endif  // ORNN_OPTIMIZER_H_
