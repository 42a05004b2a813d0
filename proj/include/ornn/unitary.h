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

#ifndef ORNN_UNITARY_H_
#define ORNN_UNITARY_H_

#include <Eigen/Dense>

#include "ornn/random.h"

namespace ornn {

// Complex analogue of ReflectionStack:
//   W = Hc_n(u_n) ... Hc_{n-m+1}(u_{n-m+1}) diag(exp(i theta))
// with Hc_k(u) = diag(I_{n-k}, I_k - 2 u u^* / ||u||^2). Column j of u()
// holds u_{n-j} below j structural zeros; 0 <= m <= n - 1. With m = n - 1
// every unitary matrix is reachable.
class ComplexReflectionStack {
 public:
  ComplexReflectionStack(Eigen::MatrixXcd u, Eigen::VectorXd theta);

  int n() const { return static_cast<int>(theta_.size()); }
  int m() const { return static_cast<int>(u_.cols()); }
  const Eigen::MatrixXcd& u() const { return u_; }
  const Eigen::VectorXd& theta() const { return theta_; }

 private:
  Eigen::MatrixXcd u_;
  Eigen::VectorXd theta_;
  Eigen::VectorXd squared_norms_;

  friend Eigen::VectorXcd UnitaryChainMatvec(const ComplexReflectionStack&,
                                             const Eigen::VectorXcd&);
};

// Real and imaginary parts ~ Uniform(-1, 1), theta ~ Uniform(-pi, pi).
ComplexReflectionStack RandomComplexStack(int n, int m, Rng& rng);

Eigen::VectorXcd UnitaryChainMatvec(const ComplexReflectionStack& stack,
                                    const Eigen::VectorXcd& z);

Eigen::MatrixXcd MaterializeUnitary(const ComplexReflectionStack& stack);

// ||W^* W - I||_F.
double UnitarityError(const Eigen::MatrixXcd& w);

// [[A, -B], [B, A]] for W = A + iB.
Eigen::MatrixXd LiftToReal(const Eigen::MatrixXcd& w);

// (Re z; Im z).
Eigen::VectorXd LiftVector(const Eigen::VectorXcd& z);

// (Re V; Im V) for a complex input matrix.
Eigen::MatrixXd LiftInputMatrix(const Eigen::MatrixXcd& v);

// (|z| + b) z / |z| where |z| + b > 0, else 0. z = 0 maps to 0.
Eigen::VectorXcd ModRelu(const Eigen::VectorXcd& z, const Eigen::VectorXd& b);

// modReLU on the lifted representation: entry i is paired with entry
// (i + n) mod 2n and uses bias i mod n, where a has length 2n. Throws
// ShapeError on odd length or a bias of the wrong size.
Eigen::VectorXd ModReluReal(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace ornn

#endif  // ORNN_UNITARY_H_
