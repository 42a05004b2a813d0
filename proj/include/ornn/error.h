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

#ifndef ORNN_ERROR_H_
#define ORNN_ERROR_H_

#include <stdexcept>
#include <string>

namespace ornn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A reflection vector whose squared norm is below kMinSquaredNorm.
class InvalidReflection : public Error {
 public:
  using Error::Error;
};

// Inconsistent dimensions between arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, singular triangular factors and similar.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// QR of a (numerically) rank-deficient matrix. Carries the failing column
// (0-based).
class DecompositionFailure : public Error {
 public:
  DecompositionFailure(const std::string& what, int column)
      : Error(what), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

// Violated precondition that is not a shape problem.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Internal self-check failed (e.g. R != I after decomposing an orthogonal
// matrix).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Dense gradient formulas requested for m == n.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

// A trainable reflection vector collapsed during optimisation.
class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

// Malformed files, config entries or task specifications.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ornn

#endif  // ORNN_ERROR_H_
