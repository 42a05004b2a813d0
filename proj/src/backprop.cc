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

#include <algorithm>
#include <string>
#include <utility>

#include "ornn/error.h"

namespace ornn {

void ZeroStructuralEntries(Eigen::MatrixXd& du) {
  for (Eigen::Index c = 1; c < du.cols(); ++c) {
    du.col(c).head(std::min(c, du.rows())).setZero();
  }
}

GradientBundle ChainBackward(const ReflectionStack& stack,
                             const ForwardTape& tape,
                             const Eigen::VectorXd& grad_c,
                             FlopCounter* counter) {
  const int n = stack.n();
  const int cols = stack.columns();
  if (grad_c.size() != n || tape.h.rows() != n || tape.h.cols() != cols + 1 ||
      tape.h_tilde.size() != cols) {
    throw ShapeError("ChainBackward: tape or gradient does not match stack");
  }
  const Eigen::MatrixXd& u = stack.u();
  const Eigen::VectorXd& norms = tape.norms;

  GradientBundle out;
  out.du.resize(n, cols);
  out.c_tilde.resize(cols);
  Eigen::VectorXd g = grad_c;
  double* gs = g.data();

  for (int c = 0; c < cols; ++c) {
    const double* uc = u.col(c).data();
    double dot = uc[c] * gs[c];
    for (int i = c + 1; i < n; ++i) dot += uc[i] * gs[i];
    const double coeff = (2.0 / norms[c]) * dot;
    CountFlops(counter, 2 * (n - c) + 1);

    for (int i = c; i < n; ++i) gs[i] -= coeff * uc[i];
    CountFlops(counter, 2 * (n - c));

    const double ht = tape.h_tilde[c];
    const double* next = tape.h.col(c + 1).data();
    double* gcol = out.du.col(c).data();
    for (int i = 0; i < n; ++i) gcol[i] = -(ht * gs[i] + coeff * next[i]);
    CountFlops(counter, 3 * n);
    // Rows above the column's support are not parameters.
    for (int i = 0; i < c; ++i) gcol[i] = 0.0;

    out.c_tilde[c] = coeff;
  }
  if (stack.has_sign_factor()) {
    gs[n - 1] *= stack.u1();
    CountFlops(counter, 1);
  }
  out.dh = std::move(g);
  return out;
}

LocalStep LocalFpBp(const ReflectionStack& stack, const Eigen::VectorXd& h_prev,
                    const Eigen::VectorXd& grad_c, FlopCounter* counter) {
  LocalStep step;
  step.c = ChainMatvec(stack, h_prev, &step.tape, counter);
  step.grads = ChainBackward(stack, step.tape, grad_c, counter);
  return step;
}

GradientBundle GradFormulas(const ReflectionStack& stack,
                            const Eigen::VectorXd& h,
                            const Eigen::VectorXd& grad_c) {
  if (stack.has_sign_factor()) {
    throw UnsupportedRegime(
        "GradFormulas: the dense formulas need m < n; use LocalFpBp for m == n");
  }
  const int n = stack.n();
  if (h.size() != n || grad_c.size() != n) {
    throw ShapeError("GradFormulas: vectors must have length " +
                     std::to_string(n));
  }
  const Eigen::MatrixXd& u = stack.u();
  const CompactWY wy = BuildCompactWy(stack);
  const Eigen::VectorXd h_tilde =
      wy.t.triangularView<Eigen::Upper>().solve(u.transpose() * h);
  const Eigen::VectorXd c_tilde =
      wy.t.transpose().triangularView<Eigen::Lower>().solve(u.transpose() *
                                                            grad_c);
  if (!h_tilde.allFinite() || !c_tilde.allFinite()) {
    throw NumericalFailure("GradFormulas: triangular solve is not finite");
  }
  const Eigen::MatrixXd hc = h_tilde * c_tilde.transpose();
  const Eigen::MatrixXd ch = c_tilde * h_tilde.transpose();
  const Eigen::MatrixXd mixed =
      hc.cwiseProduct(wy.b.transpose()) + ch.cwiseProduct(wy.b);

  GradientBundle out;
  out.du = u * mixed - grad_c * h_tilde.transpose() - h * c_tilde.transpose();
  ZeroStructuralEntries(out.du);
  out.dh = grad_c - u * c_tilde;
  out.c_tilde = c_tilde;
  return out;
}

GradientBundle FiniteDiffGrad(const ReflectionStack& stack,
                              const Eigen::VectorXd& h,
                              const Eigen::VectorXd& grad_c, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("FiniteDiffGrad: eps must be > 0");
  const int n = stack.n();
  if (h.size() != n || grad_c.size() != n) {
    throw ShapeError("FiniteDiffGrad: vectors must have length " +
                     std::to_string(n));
  }
  const int cols = stack.columns();
  auto loss = [&](const Eigen::MatrixXd& u, const Eigen::VectorXd& x) {
    const ReflectionStack perturbed(stack.m(), u, stack.u1());
    return grad_c.dot(ChainMatvec(perturbed, x));
  };

  GradientBundle out;
  out.du = Eigen::MatrixXd::Zero(n, cols);
  Eigen::MatrixXd u = stack.u();
  for (int c = 0; c < cols; ++c) {
    for (int i = c; i < n; ++i) {
      const double saved = u(i, c);
      u(i, c) = saved + eps;
      const double up = loss(u, h);
      u(i, c) = saved - eps;
      const double down = loss(u, h);
      u(i, c) = saved;
      out.du(i, c) = (up - down) / (2.0 * eps);
    }
  }
  out.dh.resize(n);
  Eigen::VectorXd x = h;
  for (int i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = loss(u, x);
    x[i] = saved - eps;
    const double down = loss(u, x);
    x[i] = saved;
    out.dh[i] = (up - down) / (2.0 * eps);
  }
  return out;
}

}  // namespace ornn
