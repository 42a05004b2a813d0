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

#include "ornn/householder.h"

#include <cmath>
#include <string>
#include <utility>

#include "ornn/error.h"

namespace ornn {
namespace {

std::string Dims(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

// Euclidean norm without overflow or underflow for extreme entries.
double ScaledNorm(const Eigen::VectorXd& v) { return v.stableNorm(); }

}  // namespace

Eigen::VectorXd ReflectApply(int k, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (k < 2 || k > n || u.size() != k) {
    throw ShapeError("ReflectApply: need 2 <= k <= n and |u| == k, got k=" +
                     std::to_string(k) + ", |u|=" + std::to_string(u.size()) +
                     ", n=" + std::to_string(n));
  }
  const double norm2 = u.squaredNorm();
  if (!(norm2 >= kMinSquaredNorm)) {
    throw InvalidReflection("ReflectApply: degenerate reflection vector");
  }
  Eigen::VectorXd y = x;
  auto tail = y.tail(k);
  const double coeff = 2.0 * u.dot(tail) / norm2;
  tail -= coeff * u;
  return y;
}

ReflectionStack::ReflectionStack(int m, Eigen::MatrixXd u, double u1)
    : m_(m), u_(std::move(u)), u1_(u1) {
  const int rows = static_cast<int>(u_.rows());
  if (rows < 1 || m < 1 || m > rows) {
    throw ShapeError("ReflectionStack: need 1 <= m <= n, got n=" +
                     std::to_string(rows) + ", m=" + std::to_string(m));
  }
  if (u_.cols() != StoredColumns(rows, m)) {
    throw ShapeError("ReflectionStack: U must be " +
                     Dims(rows, StoredColumns(rows, m)) + ", got " +
                     Dims(u_.rows(), u_.cols()));
  }
  if (m == rows) {
    if (u1_ != 1.0 && u1_ != -1.0) {
      throw PreconditionError("ReflectionStack: u1 must be -1 or +1, got " +
                              std::to_string(u1_));
    }
  } else {
    u1_ = 1.0;
  }
  squared_norms_.resize(u_.cols());
  for (int c = 0; c < u_.cols(); ++c) {
    for (int i = 0; i < c; ++i) {
      if (u_(i, c) != 0.0) {
        throw PreconditionError("ReflectionStack: structural zero (" +
                                std::to_string(i) + ", " + std::to_string(c) +
                                ") is nonzero");
      }
    }
    const double norm2 = u_.col(c).tail(rows - c).squaredNorm();
    if (!(norm2 >= kMinSquaredNorm) || !std::isfinite(norm2)) {
      throw InvalidReflection("ReflectionStack: column " + std::to_string(c) +
                              " has squared norm " + std::to_string(norm2));
    }
    squared_norms_[c] = norm2;
  }
}

ReflectionStack RandomStack(int n, int m, Rng& rng) {
  const int cols = ReflectionStack::StoredColumns(n, m);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, cols);
  for (int c = 0; c < cols; ++c) {
    for (int i = c; i < n; ++i) u(i, c) = Uniform(rng, -1.0, 1.0);
  }
  const double u1 = UniformUnit(rng) < 0.5 ? -1.0 : 1.0;
  return ReflectionStack(m, std::move(u), u1);
}

Eigen::VectorXd ChainMatvec(const ReflectionStack& stack,
                            const Eigen::VectorXd& h, ForwardTape* tape,
                            FlopCounter* counter) {
  const int n = stack.n();
  if (h.size() != n) {
    throw ShapeError("ChainMatvec: |h| = " + std::to_string(h.size()) +
                     ", expected " + std::to_string(n));
  }
  const int cols = stack.columns();
  const Eigen::MatrixXd& u = stack.u();
  const Eigen::VectorXd& norms = stack.squared_norms();

  Eigen::VectorXd x = h;
  if (stack.has_sign_factor()) {
    x[n - 1] *= stack.u1();
    CountFlops(counter, 1);
  }
  if (tape != nullptr) {
    tape->h.resize(n, cols + 1);
    tape->h_tilde.resize(cols);
    tape->norms = norms;
    tape->h.col(cols) = x;
  }

  double* xs = x.data();
  for (int c = cols - 1; c >= 0; --c) {
    const double* uc = u.col(c).data();
    // Inner product over the n - c nonzero entries.
    double dot = uc[c] * xs[c];
    for (int i = c + 1; i < n; ++i) dot += uc[i] * xs[i];
    const double coeff = (2.0 / norms[c]) * dot;
    CountFlops(counter, 2 * (n - c) + 1);

    for (int i = 0; i < n; ++i) xs[i] -= coeff * uc[i];
    CountFlops(counter, 2 * n);

    if (tape != nullptr) {
      tape->h_tilde[c] = coeff;
      tape->h.col(c) = x;
    }
  }
  return x;
}

CompactWY BuildCompactWy(const ReflectionStack& stack) {
  const Eigen::MatrixXd& u = stack.u();
  const Eigen::Index cols = u.cols();
  const Eigen::MatrixXd gram = u.transpose() * u;
  CompactWY wy;
  wy.t = gram.triangularView<Eigen::StrictlyUpper>();
  wy.t.diagonal() = 0.5 * gram.diagonal();
  wy.b = Eigen::MatrixXd::Zero(cols, cols);
  wy.b.triangularView<Eigen::StrictlyUpper>().setOnes();
  wy.b.diagonal().setConstant(0.5);
  return wy;
}

Eigen::VectorXd WyMatvec(const ReflectionStack& stack, const CompactWY& wy,
                         const Eigen::VectorXd& h) {
  const int n = stack.n();
  const int cols = stack.columns();
  if (h.size() != n || wy.t.rows() != cols || wy.t.cols() != cols) {
    throw ShapeError("WyMatvec: inconsistent dimensions");
  }
  Eigen::VectorXd x = h;
  if (stack.has_sign_factor()) x[n - 1] *= stack.u1();
  if (cols == 0) return x;
  for (int i = 0; i < cols; ++i) {
    if (!(wy.t(i, i) > 0.0)) {
      throw NumericalFailure("WyMatvec: T has a non-positive diagonal entry");
    }
  }
  const Eigen::VectorXd rhs = stack.u().transpose() * x;
  const Eigen::VectorXd coeffs =
      wy.t.triangularView<Eigen::Upper>().solve(rhs);
  if (!coeffs.allFinite()) {
    throw NumericalFailure("WyMatvec: triangular solve is not finite");
  }
  return x - stack.u() * coeffs;
}

Eigen::MatrixXd Materialize(const ReflectionStack& stack) {
  const int n = stack.n();
  Eigen::MatrixXd w(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    w.col(j) = ChainMatvec(stack, e);
    e[j] = 0.0;
  }
  return w;
}

double OrthogonalityError(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("OrthogonalityError: matrix is " +
                     Dims(m.rows(), m.cols()));
  }
  const Eigen::MatrixXd gram = m.transpose() * m;
  return (gram - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
}

QrResult QrDecompose(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n < 1 || a.cols() != n) {
    throw ShapeError("QrDecompose: expected a square matrix, got " +
                     Dims(a.rows(), a.cols()));
  }
  if (!a.allFinite()) {
    throw NumericalFailure("QrDecompose: input has non-finite entries");
  }
  const double scale = a.norm();
  const double floor = kRankTolerance * scale;
  Eigen::MatrixXd r = a;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n - 1);

  for (int k = 0; k < n - 1; ++k) {
    const int len = n - k;
    const Eigen::VectorXd x = r.col(k).tail(len);
    const double norm = ScaledNorm(x);
    if (!(norm > floor)) {
      throw DecompositionFailure(
          "QrDecompose: column " + std::to_string(k) +
              " is numerically dependent on the previous ones",
          k);
    }
    const double below = ScaledNorm(x.tail(len - 1));
    Eigen::VectorXd v(len);
    if (x[0] > 0.0 && below <= 1e-15 * norm) {
      // Column already points along +e_1. Any nonzero vector will do, and the
      // last basis vector only flips the last row of R, which the final sign
      // step absorbs.
      v.setZero();
      v[len - 1] = 1.0;
      r.col(k).tail(len - 1).setZero();
      r.row(n - 1).tail(n - k - 1) *= -1.0;
    } else {
      // v = x - ||x|| e_1. For x_0 > 0 the first entry is rewritten as
      // -(sum of squares below) / (x_0 + ||x||), which is the same number
      // without the cancellation.
      v = x;
      if (x[0] > 0.0) {
        v[0] = -(below * below) / (x[0] + norm);
      } else {
        v[0] = x[0] - norm;
      }
      v /= ScaledNorm(v);
      // Apply H(v) to the trailing columns; column k becomes ||x|| e_1.
      for (int j = k + 1; j < n; ++j) {
        auto col = r.col(j).tail(len);
        col -= (2.0 * v.dot(col)) * v;
      }
      r(k, k) = norm;
      r.col(k).tail(len - 1).setZero();
    }
    u.col(k).tail(len) = v;
  }

  const double last = r(n - 1, n - 1);
  if (!(std::abs(last) > floor)) {
    throw DecompositionFailure(
        "QrDecompose: column " + std::to_string(n - 1) +
            " is numerically dependent on the previous ones",
        n - 1);
  }
  const double u1 = last > 0.0 ? 1.0 : -1.0;
  r.row(n - 1) *= u1;
  return QrResult{ReflectionStack(n, std::move(u), u1), std::move(r)};
}

ReflectionStack DecomposeOrthogonal(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) {
    throw ShapeError("DecomposeOrthogonal: matrix is " +
                     Dims(q.rows(), q.cols()));
  }
  const double err = OrthogonalityError(q);
  if (!(err < 1e-8)) {
    throw PreconditionError(
        "DecomposeOrthogonal: input is not orthogonal (||Q'Q - I||_F = " +
        std::to_string(err) + ")");
  }
  QrResult qr = QrDecompose(q);
  const double r_err =
      (qr.r - Eigen::MatrixXd::Identity(q.rows(), q.cols())).norm();
  if (!(r_err < 1e-8)) {
    throw ConsistencyError("DecomposeOrthogonal: R deviates from I by " +
                           std::to_string(r_err));
  }
  return std::move(qr.q);
}

}  // namespace ornn
