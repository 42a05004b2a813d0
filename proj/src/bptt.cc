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

#include "ornn/bptt.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ornn/backprop.h"
#include "ornn/error.h"

namespace ornn {

StorageMode ParseStorageMode(std::string_view name) {
  if (name == "store" || name == "store-tapes") return StorageMode::kStoreTapes;
  if (name == "recompute" || name == "recompute-tapes") {
    return StorageMode::kRecomputeTapes;
  }
  throw FormatError("unknown storage mode '" + std::string(name) + "'");
}

const char* StorageModeName(StorageMode mode) {
  return mode == StorageMode::kStoreTapes ? "store" : "recompute";
}

ModelGradients ModelGradients::ZerosLike(const OrnnParams& p) {
  ModelGradients g;
  g.du = Eigen::MatrixXd::Zero(p.u.rows(), p.u.cols());
  g.dv = Eigen::MatrixXd::Zero(p.v.rows(), p.v.cols());
  g.dy = Eigen::MatrixXd::Zero(p.y.rows(), p.y.cols());
  g.d_hidden_bias = Eigen::VectorXd::Zero(p.hidden_bias.size());
  g.d_output_bias = Eigen::VectorXd::Zero(p.output_bias.size());
  g.d_modrelu_bias = Eigen::VectorXd::Zero(p.modrelu_bias.size());
  return g;
}

namespace {

void CheckCompatible(const OrnnParams& params, const TaskBatch& batch) {
  CheckShapes(params);
  CheckBatch(batch);
  if (batch.input_dim != params.input_dim ||
      batch.output_dim != params.output_dim) {
    throw ShapeError("batch has input/output sizes " +
                     std::to_string(batch.input_dim) + "/" +
                     std::to_string(batch.output_dim) + ", model expects " +
                     std::to_string(params.input_dim) + "/" +
                     std::to_string(params.output_dim));
  }
}

// Loss contribution of one scored output (unnormalised) and dLoss/dOutput.
double OutputLoss(const TaskBatch& batch, int seq, int j,
                  const Eigen::VectorXd& out, Eigen::VectorXd* grad) {
  if (batch.loss == LossKind::kMse) {
    const Eigen::VectorXd diff = out - batch.targets[seq].col(j);
    if (grad != nullptr) *grad = 2.0 * diff;
    return diff.squaredNorm();
  }
  const int label = batch.labels[seq][j];
  const Eigen::VectorXd p = Softmax(out);
  if (grad != nullptr) {
    *grad = p;
    (*grad)[label] -= 1.0;
  }
  const double top = out.maxCoeff();
  return top + std::log((out.array() - top).exp().sum()) - out[label];
}

double LossNormaliser(const TaskBatch& batch) {
  double count = static_cast<double>(batch.size()) * batch.scored_steps();
  if (batch.loss == LossKind::kMse) count *= batch.output_dim;
  return count;
}

}  // namespace

BpttResult Bptt(const OrnnParams& params, const TaskBatch& batch,
                StorageMode mode, FlopCounter* forward_flops,
                FlopCounter* backward_flops) {
  CheckCompatible(params, batch);
  const ReflectionStack stack = params.stack();
  const int n = params.n;
  const int steps = batch.steps;
  const double scale = 1.0 / LossNormaliser(batch);
  const bool store = mode == StorageMode::kStoreTapes;

  BpttResult result;
  result.grads = ModelGradients::ZerosLike(params);
  ModelGradients& grads = result.grads;

  std::vector<Eigen::VectorXd> hidden(steps + 1);
  std::vector<Eigen::VectorXd> pre(steps);
  std::vector<ForwardTape> tapes(store ? steps : 0);
  std::vector<Eigen::VectorXd> out_grad(steps);
  std::vector<bool> scored(steps, false);
  double total = 0.0;

  for (int s = 0; s < batch.size(); ++s) {
    const Eigen::MatrixXd& x = batch.inputs[s];
    hidden[0] = Eigen::VectorXd::Zero(n);
    std::fill(scored.begin(), scored.end(), false);
    for (int t = 0; t < steps; ++t) {
      CellOutput cell =
          CellForward(params, stack, hidden[t], x.col(t),
                      store ? &tapes[t] : nullptr, forward_flops);
      hidden[t + 1] = std::move(cell.h);
      pre[t] = std::move(cell.pre);
    }
    for (int j = 0; j < batch.scored_steps(); ++j) {
      const int t = batch.scored_step_index(j);
      const Eigen::VectorXd out = OutputLayer(params, hidden[t + 1]);
      total += OutputLoss(batch, s, j, out, &out_grad[t]);
      out_grad[t] *= scale;
      scored[t] = true;
    }

    Eigen::VectorXd dh = Eigen::VectorXd::Zero(n);
    ForwardTape scratch;
    for (int t = steps - 1; t >= 0; --t) {
      if (scored[t]) {
        grads.dy.noalias() += out_grad[t] * hidden[t + 1].transpose();
        grads.d_output_bias += out_grad[t];
        dh.noalias() += params.y.transpose() * out_grad[t];
      }
      const Eigen::VectorXd dc =
          ActivationBackward(params.activation, pre[t], dh, params.modrelu_bias,
                             &grads.d_modrelu_bias);
      grads.dv.noalias() += dc * x.col(t).transpose();
      grads.d_hidden_bias += dc;

      const ForwardTape* tape = &scratch;
      if (store) {
        tape = &tapes[t];
      } else {
        ChainMatvec(stack, hidden[t], &scratch, backward_flops);
      }
      GradientBundle step = ChainBackward(stack, *tape, dc, backward_flops);
      grads.du += step.du;
      dh = std::move(step.dh);
    }
  }
  result.loss = total * scale;
  return result;
}

std::vector<Eigen::MatrixXd> Predict(const OrnnParams& params,
                                     const TaskBatch& batch,
                                     FlopCounter* counter) {
  CheckCompatible(params, batch);
  const ReflectionStack stack = params.stack();
  std::vector<Eigen::MatrixXd> outputs;
  outputs.reserve(batch.size());
  for (int s = 0; s < batch.size(); ++s) {
    Eigen::MatrixXd out(params.output_dim, batch.scored_steps());
    Eigen::VectorXd h = Eigen::VectorXd::Zero(params.n);
    int j = 0;
    for (int t = 0; t < batch.steps; ++t) {
      h = CellForward(params, stack, h, batch.inputs[s].col(t), nullptr,
                      counter)
              .h;
      if (j < batch.scored_steps() && batch.scored_step_index(j) == t) {
        out.col(j++) = OutputLayer(params, h);
      }
    }
    outputs.push_back(std::move(out));
  }
  return outputs;
}

double EvaluateLoss(const OrnnParams& params, const TaskBatch& batch) {
  const std::vector<Eigen::MatrixXd> outputs = Predict(params, batch);
  double total = 0.0;
  for (int s = 0; s < batch.size(); ++s) {
    for (int j = 0; j < batch.scored_steps(); ++j) {
      total += OutputLoss(batch, s, j, outputs[s].col(j), nullptr);
    }
  }
  return total / LossNormaliser(batch);
}

double EvaluateNmse(const OrnnParams& params, const TaskBatch& batch) {
  if (batch.loss != LossKind::kMse) {
    throw PreconditionError("EvaluateNmse: batch is not a regression batch");
  }
  const std::vector<Eigen::MatrixXd> outputs = Predict(params, batch);
  const Eigen::Index rows = batch.output_dim;
  const Eigen::Index cols = batch.scored_steps();
  Eigen::MatrixXd all_out(rows, cols * batch.size());
  Eigen::MatrixXd all_tgt(rows, cols * batch.size());
  for (int s = 0; s < batch.size(); ++s) {
    all_out.middleCols(s * cols, cols) = outputs[s];
    all_tgt.middleCols(s * cols, cols) = batch.targets[s];
  }
  return NormalisedMse(all_out, all_tgt);
}

}  // namespace ornn
