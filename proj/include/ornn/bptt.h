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

#ifndef ORNN_BPTT_H_
#define ORNN_BPTT_H_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ornn/flops.h"
#include "ornn/model.h"
#include "ornn/tasks.h"

namespace ornn {

// How the backward pass gets the per-step chain intermediates.
//   kStoreTapes:     keep every ForwardTape from the forward pass
//                    (m n values per step).
//   kRecomputeTapes: keep only hidden states and rerun the chain forward pass
//                    inside each backward step.
// Both perform the same arithmetic and give bitwise identical gradients.
enum class StorageMode { kStoreTapes, kRecomputeTapes };

StorageMode ParseStorageMode(std::string_view name);
const char* StorageModeName(StorageMode mode);

// Gradients of the batch loss with respect to every trainable tensor.
struct ModelGradients {
  Eigen::MatrixXd du;
  double du1 = 0.0;
  Eigen::MatrixXd dv;
  Eigen::MatrixXd dy;
  Eigen::VectorXd d_hidden_bias;
  Eigen::VectorXd d_output_bias;
  Eigen::VectorXd d_modrelu_bias;

  static ModelGradients ZerosLike(const OrnnParams& params);
};

struct BpttResult {
  double loss = 0.0;
  ModelGradients grads;
};

// Loss of a batch and its gradients. The loss is the mean over sequences and
// scored outputs (and output units for MSE). Sequences are processed in index
// order and steps in reverse time, so results are reproducible bit for bit.
// `forward_flops` and `backward_flops` receive the hidden-to-hidden counts.
BpttResult Bptt(const OrnnParams& params, const TaskBatch& batch,
                StorageMode mode, FlopCounter* forward_flops = nullptr,
                FlopCounter* backward_flops = nullptr);

// Scored outputs per sequence (output_dim x scored steps).
std::vector<Eigen::MatrixXd> Predict(const OrnnParams& params,
                                     const TaskBatch& batch,
                                     FlopCounter* counter = nullptr);

// Batch loss without gradients.
double EvaluateLoss(const OrnnParams& params, const TaskBatch& batch);

// MSE / target variance pooled over the batch (MSE batches only).
double EvaluateNmse(const OrnnParams& params, const TaskBatch& batch);

}  // namespace ornn

#endif  // ORNN_BPTT_H_
