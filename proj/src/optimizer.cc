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

#include "ornn/optimizer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ornn/error.h"
#include "ornn/householder.h"

namespace ornn {

void AdamUpdate(const AdamConfig& config, std::int64_t step,
                Eigen::Ref<Eigen::ArrayXd> param,
                const Eigen::Ref<const Eigen::ArrayXd>& grad,
                AdamMoments& moments) {
  if (moments.first.size() != param.size()) {
    moments.first = Eigen::ArrayXd::Zero(param.size());
    moments.second = Eigen::ArrayXd::Zero(param.size());
  }
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step));
  moments.first = b1 * moments.first + (1.0 - b1) * grad;
  moments.second = b2 * moments.second + (1.0 - b2) * grad.square();
  param -= config.learning_rate * (moments.first / correction1) /
           ((moments.second / correction2).sqrt() + config.epsilon);
}

const std::vector<std::string>& AdamState::TensorNames() {
  static const std::vector<std::string> names = {
      "U", "V", "Y", "hidden_bias", "output_bias", "modrelu_bias"};
  return names;
}

AdamState AdamState::ZerosLike(const OrnnParams& p) {
  AdamState state;
  const Eigen::Index sizes[] = {p.u.size(),           p.v.size(),
                                p.y.size(),           p.hidden_bias.size(),
                                p.output_bias.size(), p.modrelu_bias.size()};
  for (Eigen::Index size : sizes) {
    state.moments.push_back(
        AdamMoments{Eigen::ArrayXd::Zero(size), Eigen::ArrayXd::Zero(size)});
  }
  return state;
}

void ProjectConstraints(OrnnParams& params) {
  for (Eigen::Index c = 1; c < params.u.cols(); ++c) {
    params.u.col(c).head(std::min<Eigen::Index>(c, params.u.rows())).setZero();
  }
  params.u1 = SnapSign(params.u1);
  for (Eigen::Index c = 0; c < params.u.cols(); ++c) {
    const double norm2 = params.u.col(c).tail(params.u.rows() - c).squaredNorm();
    if (!(norm2 >= kMinSquaredNorm)) {
      throw DegenerateParameter("reflection vector in column " +
                                std::to_string(c) +
                                " collapsed (squared norm " +
                                std::to_string(norm2) + ")");
    }
  }
}

namespace {

template <typename Tensor>
Eigen::Map<Eigen::ArrayXd> Flat(Tensor& t) {
  return Eigen::Map<Eigen::ArrayXd>(t.data(), t.size());
}

template <typename Tensor>
Eigen::Map<const Eigen::ArrayXd> Flat(const Tensor& t) {
  return Eigen::Map<const Eigen::ArrayXd>(t.data(), t.size());
}

}  // namespace

void AdamStep(OrnnParams& params, const ModelGradients& grads, AdamState& state,
              const AdamConfig& config) {
  Eigen::Map<Eigen::ArrayXd> targets[] = {
      Flat(params.u),           Flat(params.v),
      Flat(params.y),           Flat(params.hidden_bias),
      Flat(params.output_bias), Flat(params.modrelu_bias)};
  Eigen::Map<const Eigen::ArrayXd> gradients[] = {
      Flat(grads.du),           Flat(grads.dv),
      Flat(grads.dy),           Flat(grads.d_hidden_bias),
      Flat(grads.d_output_bias), Flat(grads.d_modrelu_bias)};
  const auto& names = AdamState::TensorNames();
  if (state.moments.size() != names.size()) {
    throw ShapeError("AdamStep: optimizer state has the wrong tensor count");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (targets[i].size() != gradients[i].size()) {
      throw ShapeError("AdamStep: gradient for " + names[i] +
                       " has the wrong size");
    }
    if (!gradients[i].allFinite()) {
      throw NumericalFailure("AdamStep: non-finite gradient in tensor " +
                             names[i]);
    }
  }
  ++state.step;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (targets[i].size() == 0) continue;
    AdamUpdate(config, state.step, targets[i], gradients[i], state.moments[i]);
  }
  ProjectConstraints(params);
}

}  // namespace ornn
