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

#ifndef ORNN_HOUSEHOLDER_H_
#define ORNN_HOUSEHOLDER_H_

#include <Eigen/Dense>

#include "ornn/flops.h"
#include "ornn/random.h"

namespace ornn {

// Squared-norm floor for reflection vectors. Anything smaller is rejected as
// degenerate; 2 / ||u||^2 would blow up long before a realistic vector gets
// there.
inline constexpr double kMinSquaredNorm = 1e-30;

// Applies H_k(u) = diag(I_{n-k}, I_k - 2 u u' / ||u||^2) to x, where u has
// length k (2 <= k <= n) and n = x.size().
Eigen::VectorXd ReflectApply(int k, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& x);

// An orthogonal n x n matrix represented as a product of Householder
// reflections
//
//   W = H_n(u_n) H_{n-1}(u_{n-1}) ... H_{n-m+1}(u_{n-m+1})       (m < n)
//   W = H_n(u_n) ... H_2(u_2) diag(I_{n-1}, u1)                  (m == n)
//
// Column j (0-based) of u() holds u_{n-j} below j structural zeros, so u() is
// n x m for m < n and n x (n - 1) for m == n, where the last factor is the
// sign u1 instead of a vector.
class ReflectionStack {
 public:
  // Validates shape, structural zeros, norms and (for m == n) the sign.
  // Throws ShapeError, PreconditionError or InvalidReflection.
  ReflectionStack(int m, Eigen::MatrixXd u, double u1 = 1.0);

  // Number of stored columns for a given (n, m).
  static int StoredColumns(int n, int m) { return m < n ? m : n - 1; }

  int n() const { return static_cast<int>(u_.rows()); }
  int m() const { return m_; }
  int columns() const { return static_cast<int>(u_.cols()); }
  bool has_sign_factor() const { return m_ == n(); }
  double u1() const { return u1_; }
  const Eigen::MatrixXd& u() const { return u_; }
  // N = (||u_n||^2, ..., ||u_{n-m+1}||^2), computed once at construction.
  const Eigen::VectorXd& squared_norms() const { return squared_norms_; }

 private:
  int m_;
  Eigen::MatrixXd u_;
  double u1_;
  Eigen::VectorXd squared_norms_;
};

// Random stack with tail entries ~ Uniform(-1, 1) and u1 = +-1 with equal
// probability.
ReflectionStack RandomStack(int n, int m, Rng& rng);

// Intermediates of one chain forward pass.
//   h:       n x (columns + 1). Column columns() is the chain input (after the
//            sign factor when m == n); column 0 is the output W h.
//   h_tilde: per-reflection coefficients, h(:,k) = h(:,k+1) - h_tilde(k) u(:,k).
//   norms:   the squared norms used for this pass.
struct ForwardTape {
  Eigen::MatrixXd h;
  Eigen::VectorXd h_tilde;
  Eigen::VectorXd norms;
};

// W h using only the nonzero tail of each column for the inner products.
// Costs (4n - m + 2) m flops for m < n; the sign factor adds one flop when
// m == n. Fills `tape` when non-null.
Eigen::VectorXd ChainMatvec(const ReflectionStack& stack,
                            const Eigen::VectorXd& h,
                            ForwardTape* tape = nullptr,
                            FlopCounter* counter = nullptr);

// Compact WY factors: T = striu(U'U) + diag(U'U) / 2 and the constant mask
// B = striu(J) + I / 2.
struct CompactWY {
  Eigen::MatrixXd t;
  Eigen::MatrixXd b;
};

// Builds T and B from the stored columns. For m == n these are the n - 1
// reflection columns; the sign factor is then applied separately by
// WyMatvec.
CompactWY BuildCompactWy(const ReflectionStack& stack);

// (I - U T^{-1} U') h, preceded by the sign factor when m == n. Throws
// NumericalFailure if T is singular or the solve produces non-finite values.
Eigen::VectorXd WyMatvec(const ReflectionStack& stack, const CompactWY& wy,
                         const Eigen::VectorXd& h);

// Dense W.
Eigen::MatrixXd Materialize(const ReflectionStack& stack);

// ||M'M - I||_F for square M.
double OrthogonalityError(const Eigen::MatrixXd& m);

// Columns whose remaining norm falls below this fraction of ||A||_F make
// QrDecompose fail.
inline constexpr double kRankTolerance = 1e-12;

struct QrResult {
  ReflectionStack q;  // m == n
  Eigen::MatrixXd r;  // upper triangular, positive diagonal
};

// A = Q R with Q = H_n(u_n) ... H_2(u_2) H_1(u1). Each u_k is the unit vector
// along column - ||column|| e_1 of the active block, which keeps diag(R) > 0.
// Throws DecompositionFailure naming the column for rank-deficient input.
QrResult QrDecompose(const Eigen::MatrixXd& a);

// Stack with Materialize(stack) == q. Requires OrthogonalityError(q) < 1e-8
// (PreconditionError otherwise) and checks that the R factor is the identity
// to 1e-8 (ConsistencyError otherwise).
ReflectionStack DecomposeOrthogonal(const Eigen::MatrixXd& q);

}  // namespace ornn

#endif  // ORNN_HOUSEHOLDER_H_
