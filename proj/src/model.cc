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
#include <string>

#include "ornn/error.h"
#include "ornn/unitary.h"

namespace ornn {

Activation ParseActivation(std::string_view name) {
  if (name == "leaky-relu" || name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "modrelu-real" || name == "modrelu") return Activation::kModReluReal;
  if (name == "identity" || name == "linear") return Activation::kIdentity;
  throw FormatError("unknown activation '" + std::string(name) + "'");
}

std::string ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kLeakyRelu:
      return "leaky-relu";
    case Activation::kModReluReal:
      return "modrelu-real";
    case Activation::kIdentity:
      return "identity";
  }
  return "?";
}

Eigen::VectorXd LeakyRelu(const Eigen::VectorXd& x) {
  return x.cwiseMax(x / 10.0);
}

Eigen::VectorXd Activate(Activation activation, const Eigen::VectorXd& pre,
                         const Eigen::VectorXd& modrelu_bias) {
  switch (activation) {
    case Activation::kLeakyRelu:
      return LeakyRelu(pre);
    case Activation::kIdentity:
      return pre;
    case Activation::kModReluReal:
      return ModReluReal(pre, modrelu_bias);
  }
  return pre;
}

Eigen::VectorXd ActivationBackward(Activation activation,
                                   const Eigen::VectorXd& pre,
                                   const Eigen::VectorXd& grad_out,
                                   const Eigen::VectorXd& modrelu_bias,
                                   Eigen::VectorXd* grad_bias) {
  switch (activation) {
    case Activation::kIdentity:
      return grad_out;
    case Activation::kLeakyRelu: {
      Eigen::VectorXd out(pre.size());
      for (Eigen::Index i = 0; i < pre.size(); ++i) {
        out[i] = pre[i] >= 0.0 ? grad_out[i] : 0.1 * grad_out[i];
      }
      return out;
    }
    case Activation::kModReluReal: {
      const Eigen::Index half = pre.size() / 2;
      Eigen::VectorXd out = Eigen::VectorXd::Zero(pre.size());
      for (Eigen::Index k = 0; k < half; ++k) {
        const double a = pre[k];
        const double c = pre[k + half];
        const double r = std::hypot(a, c);
        const double bias = modrelu_bias[k];
        if (!(r > 0.0 && r + bias > 0.0)) continue;
        // out_a = (1 + bias / r) a, out_c = (1 + bias / r) c.
        const double scale = 1.0 + bias / r;
        const double r3 = r * r * r;
        const double ga = grad_out[k];
        const double gc = grad_out[k + half];
        out[k] = ga * (scale - bias * a * a / r3) - gc * bias * a * c / r3;
        out[k + half] = gc * (scale - bias * c * c / r3) - ga * bias * a * c / r3;
        if (grad_bias != nullptr) (*grad_bias)[k] += (ga * a + gc * c) / r;
      }
      return out;
    }
  }
  return grad_out;
}

namespace {

Eigen::MatrixXd GlorotUniform(int rows, int cols, Rng& rng) {
  const double s = std::sqrt(6.0 / (rows + cols));
  Eigen::MatrixXd w(rows, cols);
  // Column-major fill order keeps the draw sequence independent of Eigen's
  // expression evaluation.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) w(i, j) = Uniform(rng, -s, s);
  }
  return w;
}

}  // namespace

OrnnParams InitOrnnParams(int n, int m, int input_dim, int output_dim,
                          Activation activation, Rng& rng) {
  if (n < 1 || m < 1 || m > n || input_dim < 1 || output_dim < 1) {
    throw ShapeError("InitOrnnParams: need n >= 1, 1 <= m <= n and positive "
                     "input/output sizes");
  }
  if (activation == Activation::kModReluReal && n % 2 != 0) {
    throw ShapeError("InitOrnnParams: modReLU needs an even hidden size");
  }
  OrnnParams p;
  p.n = n;
  p.m = m;
  p.input_dim = input_dim;
  p.output_dim = output_dim;
  p.activation = activation;
  const ReflectionStack stack = RandomStack(n, m, rng);
  p.u = stack.u();
  p.u1 = stack.u1();
  p.v = GlorotUniform(n, input_dim, rng);
  p.y = GlorotUniform(output_dim, n, rng);
  p.hidden_bias = Eigen::VectorXd::Zero(n);
  p.output_bias = Eigen::VectorXd::Zero(output_dim);
  if (activation == Activation::kModReluReal) {
    p.modrelu_bias = Eigen::VectorXd::Zero(n / 2);
  }
  return p;
}

void CheckShapes(const OrnnParams& p) {
  const bool ok =
      p.u.rows() == p.n && p.u.cols() == ReflectionStack::StoredColumns(p.n, p.m) &&
      p.v.rows() == p.n && p.v.cols() == p.input_dim &&
      p.y.rows() == p.output_dim && p.y.cols() == p.n &&
      p.hidden_bias.size() == p.n && p.output_bias.size() == p.output_dim &&
      p.modrelu_bias.size() ==
          (p.activation == Activation::kModReluReal ? p.n / 2 : 0);
  if (!ok) throw ShapeError("OrnnParams: tensor shapes are inconsistent");
}

CellOutput CellForward(const OrnnParams& params, const ReflectionStack& stack,
                       const Eigen::VectorXd& h_prev, const Eigen::VectorXd& x,
                       ForwardTape* tape, FlopCounter* counter) {
  if (x.size() != params.input_dim || stack.n() != params.n) {
    throw ShapeError("CellForward: input or stack size mismatch");
  }
  CellOutput out;
  out.pre = ChainMatvec(stack, h_prev, tape, counter);
  out.pre.noalias() += params.v * x;
  out.pre += params.hidden_bias;
  out.h = Activate(params.activation, out.pre, params.modrelu_bias);
  return out;
}

Eigen::VectorXd DenseMatvec(const Eigen::MatrixXd& w, const Eigen::VectorXd& h,
                            FlopCounter* counter) {
  const Eigen::Index n = w.rows();
  if (w.cols() != h.size()) throw ShapeError("DenseMatvec: size mismatch");
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = w(i, 0) * h[0];
    for (Eigen::Index j = 1; j < h.size(); ++j) acc += w(i, j) * h[j];
    out[i] = acc;
  }
  CountFlops(counter, n * (2 * h.size() - 1));
  return out;
}

Eigen::VectorXd DenseBackward(const Eigen::MatrixXd& w,
                              const Eigen::VectorXd& h,
                              const Eigen::VectorXd& g,
                              Eigen::MatrixXd* grad_w, FlopCounter* counter) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n || h.size() != n || g.size() != n) {
    throw ShapeError("DenseBackward: size mismatch");
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = w(0, j) * g[0];
    for (Eigen::Index i = 1; i < n; ++i) acc += w(i, j) * g[i];
    out[j] = acc;
  }
  CountFlops(counter, n * (2 * n - 1));
  if (grad_w != nullptr) {
    // Accumulates; an empty matrix starts from zero.
    if (grad_w->size() == 0) grad_w->setZero(n, n);
    if (grad_w->rows() != n || grad_w->cols() != n) {
      throw ShapeError("DenseBackward: grad_w must be n x n");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) (*grad_w)(i, j) += g[i] * h[j];
    }
  }
  CountFlops(counter, n * n);
  return out;
}

CellOutput SrnnCell(const Eigen::MatrixXd& w, const OrnnParams& params,
                    const Eigen::VectorXd& h_prev, const Eigen::VectorXd& x,
                    FlopCounter* counter) {
  if (w.rows() != params.n || w.cols() != params.n ||
      x.size() != params.input_dim) {
    throw ShapeError("SrnnCell: size mismatch");
  }
  CellOutput out;
  out.pre = DenseMatvec(w, h_prev, counter);
  out.pre.noalias() += params.v * x;
  out.pre += params.hidden_bias;
  out.h = Activate(params.activation, out.pre, params.modrelu_bias);
  return out;
}

Eigen::VectorXd OutputLayer(const OrnnParams& params, const Eigen::VectorXd& h) {
  return params.y * h + params.output_bias;
}

std::string LossName(LossKind kind) {
  return kind == LossKind::kMse ? "mse" : "cross-entropy";
}

double MeanSquaredError(const Eigen::MatrixXd& outputs,
                        const Eigen::MatrixXd& targets) {
  if (outputs.size() == 0 || outputs.rows() != targets.rows() ||
      outputs.cols() != targets.cols()) {
    throw ShapeError("MeanSquaredError: empty or mismatched inputs");
  }
  return (outputs - targets).squaredNorm() / static_cast<double>(outputs.size());
}

double NormalisedMse(const Eigen::MatrixXd& outputs,
                     const Eigen::MatrixXd& targets) {
  const double mse = MeanSquaredError(outputs, targets);
  const double mean = targets.mean();
  const double var =
      (targets.array() - mean).square().sum() / static_cast<double>(targets.size());
  if (!(var > 0.0)) {
    throw NumericalFailure("NormalisedMse: targets have zero variance");
  }
  return mse / var;
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const double top = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - top).exp();
  return e / e.sum();
}

double CrossEntropy(const Eigen::MatrixXd& logits,
                    const std::vector<int>& labels) {
  if (logits.cols() == 0 ||
      logits.cols() != static_cast<Eigen::Index>(labels.size())) {
    throw ShapeError("CrossEntropy: empty or mismatched inputs");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const int label = labels[j];
    if (label < 0 || label >= logits.rows()) {
      throw ShapeError("CrossEntropy: label out of range");
    }
    const double top = logits.col(j).maxCoeff();
    const double lse =
        top + std::log((logits.col(j).array() - top).exp().sum());
    total += lse - logits(label, j);
  }
  return total / static_cast<double>(logits.cols());
}

}  // namespace ornn
