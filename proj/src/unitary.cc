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

#include "ornn/unitary.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "ornn/error.h"
#include "ornn/householder.h"

namespace ornn {

using Complex = std::complex<double>;

ComplexReflectionStack::ComplexReflectionStack(Eigen::MatrixXcd u,
                                               Eigen::VectorXd theta)
    : u_(std::move(u)), theta_(std::move(theta)) {
  const Eigen::Index n = theta_.size();
  if (n < 1 || u_.rows() != n || u_.cols() > n - 1) {
    throw ShapeError("ComplexReflectionStack: need n x m vectors with m <= n-1"
                     " and |theta| = n");
  }
  squared_norms_.resize(u_.cols());
  for (Eigen::Index c = 0; c < u_.cols(); ++c) {
    for (Eigen::Index i = 0; i < c; ++i) {
      if (u_(i, c) != Complex(0.0)) {
        throw PreconditionError("ComplexReflectionStack: structural zero (" +
                                std::to_string(i) + ", " + std::to_string(c) +
                                ") is nonzero");
      }
    }
    const double norm2 = u_.col(c).squaredNorm();
    if (!(norm2 >= kMinSquaredNorm) || !std::isfinite(norm2)) {
      throw InvalidReflection("ComplexReflectionStack: column " +
                              std::to_string(c) + " is degenerate");
    }
    squared_norms_[c] = norm2;
  }
}

ComplexReflectionStack RandomComplexStack(int n, int m, Rng& rng) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, m);
  for (int c = 0; c < m; ++c) {
    for (int i = c; i < n; ++i) {
      const double re = Uniform(rng, -1.0, 1.0);
      const double im = Uniform(rng, -1.0, 1.0);
      u(i, c) = Complex(re, im);
    }
  }
  Eigen::VectorXd theta(n);
  for (int i = 0; i < n; ++i) {
    theta[i] = Uniform(rng, -std::numbers::pi, std::numbers::pi);
  }
  return ComplexReflectionStack(std::move(u), std::move(theta));
}

Eigen::VectorXcd UnitaryChainMatvec(const ComplexReflectionStack& stack,
                                    const Eigen::VectorXcd& z) {
  const int n = stack.n();
  if (z.size() != n) {
    throw ShapeError("UnitaryChainMatvec: |z| = " + std::to_string(z.size()) +
                     ", expected " + std::to_string(n));
  }
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = std::polar(1.0, stack.theta_[i]) * z[i];
  for (int c = stack.m() - 1; c >= 0; --c) {
    auto tail = x.tail(n - c);
    const auto uc = stack.u_.col(c).tail(n - c);
    // u^* x; Eigen's dot conjugates the first argument.
    const Complex coeff = 2.0 * uc.dot(tail) / stack.squared_norms_[c];
    tail -= coeff * uc;
  }
  return x;
}

Eigen::MatrixXcd MaterializeUnitary(const ComplexReflectionStack& stack) {
  const int n = stack.n();
  Eigen::MatrixXcd w(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    w.col(j) = UnitaryChainMatvec(stack, e);
    e[j] = 0.0;
  }
  return w;
}

double UnitarityError(const Eigen::MatrixXcd& w) {
  if (w.rows() != w.cols()) throw ShapeError("UnitarityError: not square");
  return (w.adjoint() * w - Eigen::MatrixXcd::Identity(w.rows(), w.cols()))
      .norm();
}

Eigen::MatrixXd LiftToReal(const Eigen::MatrixXcd& w) {
  const Eigen::Index r = w.rows();
  const Eigen::Index c = w.cols();
  Eigen::MatrixXd out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = w.real();
  out.topRightCorner(r, c) = -w.imag();
  out.bottomLeftCorner(r, c) = w.imag();
  out.bottomRightCorner(r, c) = w.real();
  return out;
}

Eigen::VectorXd LiftVector(const Eigen::VectorXcd& z) {
  Eigen::VectorXd out(2 * z.size());
  out << z.real(), z.imag();
  return out;
}

Eigen::MatrixXd LiftInputMatrix(const Eigen::MatrixXcd& v) {
  Eigen::MatrixXd out(2 * v.rows(), v.cols());
  out << v.real(), v.imag();
  return out;
}

Eigen::VectorXcd ModRelu(const Eigen::VectorXcd& z, const Eigen::VectorXd& b) {
  if (z.size() != b.size()) {
    throw ShapeError("ModRelu: |b| must equal |z|");
  }
  Eigen::VectorXcd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double r = std::abs(z[i]);
    out[i] = (r > 0.0 && r + b[i] > 0.0) ? z[i] * ((r + b[i]) / r)
                                          : Complex(0.0);
  }
  return out;
}

Eigen::VectorXd ModReluReal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() % 2 != 0) {
    throw ShapeError("ModReluReal: input length must be even, got " +
                     std::to_string(a.size()));
  }
  const Eigen::Index half = a.size() / 2;
  if (b.size() != half) {
    throw ShapeError("ModReluReal: bias length must be " +
                     std::to_string(half));
  }
  Eigen::VectorXd out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Eigen::Index pair = (i + half) % a.size();
    const double bias = b[i % half];
    const double r = std::hypot(a[i], a[pair]);
    out[i] = (r > 0.0 && r + bias > 0.0) ? a[i] * ((r + bias) / r) : 0.0;
  }
  return out;
}

}  // namespace ornn
