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

#ifndef ORNN_SERIALIZATION_H_
#define ORNN_SERIALIZATION_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ornn/householder.h"
#include "ornn/model.h"
#include "ornn/optimizer.h"

namespace ornn {

// Binary stack record, all little endian:
//   "ORNN1" | n: u64 | m: u64 | u1: f64 | U: f64[n * columns], column major
// with columns = m for m < n and n - 1 for m == n. Structural zeros are
// stored.
void WriteStack(std::ostream& out, const ReflectionStack& stack);
ReflectionStack ReadStack(std::istream& in);
void SaveStack(const std::string& path, const ReflectionStack& stack);
ReflectionStack LoadStack(const std::string& path);

// Dense matrices reuse the stack header with m = 0 and u1 = 0:
//   "ORNN1" | rows: u64 | 0: u64 | 0.0: f64 | cols: u64 | data column major
void WriteMatrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadMatrix(std::istream& in);

// Plain text: one row per line, space separated, 17 significant digits.
// Blank lines and lines starting with '#' are ignored when reading.
void WriteTextMatrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd ReadTextMatrix(std::istream& in);
void SaveTextMatrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd LoadTextMatrix(const std::string& path);

// Complex vectors as one line of interleaved (re, im) pairs.
void WriteTextComplexVector(std::ostream& out, const Eigen::VectorXcd& z);
Eigen::VectorXcd ParseTextComplexVector(const std::string& line);

// One-step forward/backward reference case. Text stanza, whitespace
// separated, '#' starts a comment line:
//   n m
//   U (n rows of m values)
//   h (n values)  grad_c (n values)
//   C (n values)  g (n values)
//   G (n rows of m values)
struct ReferenceCase {
  Eigen::MatrixXd u;
  Eigen::VectorXd h;
  Eigen::VectorXd grad_c;
  Eigen::VectorXd c;
  Eigen::VectorXd g;
  Eigen::MatrixXd du;
};

void WriteReferenceCases(std::ostream& out,
                         const std::vector<ReferenceCase>& cases);
std::vector<ReferenceCase> ReadReferenceCases(std::istream& in);
std::vector<ReferenceCase> LoadReferenceCases(const std::string& path);

// Checkpoint: a stack record for (U, u1) followed by
//   "CKPT" | version: u32 | input_dim: u64 | output_dim: u64 |
//   activation: u32 | adam step: u64 | tensor count: u32 |
//   per tensor: name length u32, name bytes, rows u64, cols u64, f64 data
// Tensors: V, Y, hidden_bias, output_bias, modrelu_bias and the Adam moments
// "adam.first.<name>" / "adam.second.<name>" for each trainable tensor.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  OrnnParams params;
  AdamState adam;
};

void WriteCheckpoint(std::ostream& out, const OrnnParams& params,
                     const AdamState& adam);
Checkpoint ReadCheckpoint(std::istream& in);
void SaveCheckpoint(const std::string& path, const OrnnParams& params,
                    const AdamState& adam);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace ornn

#endif  // ORNN_SERIALIZATION_H_
