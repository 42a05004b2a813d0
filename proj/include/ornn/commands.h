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

#ifndef ORNN_COMMANDS_H_
#define ORNN_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ornn/train.h"

namespace ornn {

// Version of every report.json written by the command line tool.
inline constexpr int kReportSchemaVersion = 1;

// Error of `actual` against `expected`: max-abs difference divided by
// max(max-abs of expected, floor).
double ScaledError(const Eigen::MatrixXd& actual,
                   const Eigen::MatrixXd& expected, double floor);

// ---- gradcheck ----

struct GradcheckOptions {
  std::vector<int> sizes = {4, 8, 16, 32};
  // Empty means {1, n/2, n-1, n} for every n.
  std::vector<int> ms;
  int seeds = 1;
  std::uint64_t base_seed = 1;
  double formula_tolerance = 1e-11;
  double finite_diff_tolerance = 1e-6;
  double reference_tolerance = 1e-12;
  std::string reference_path;  // empty skips the reference suite
  // Flips the sign of the -h C~' term of the kernel's dU before comparison.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  double tolerance = 0.0;
  double worst = 0.0;
  std::string worst_case;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

struct GradcheckReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
};

// Suites: "formula" (kernel vs dense closed forms, m <= n-1), "finite-diff"
// (kernel vs central differences of the scalar gC'W h), "transpose" (kernel
// dh vs W'gC) and "reference" (kernel vs shipped vectors).
GradcheckReport RunGradcheck(const GradcheckOptions& options);

std::string GradcheckJson(const GradcheckReport& report);

// ---- bench ----

struct BenchOptions {
  std::vector<int> ns = {16, 32, 64, 128, 256, 512};
  // Empty means every m in [1, n-1].
  std::vector<int> ms;
  int steps = 3;
  bool timing = false;
  double min_time_ms = 20.0;  // per timed (n, m) cell
  std::uint64_t seed = 1;
};

struct FlopRow {
  int n = 0;
  int m = 0;
  std::int64_t fp = 0;  // per step, measured
  std::int64_t bp = 0;
  std::int64_t bp_recompute = 0;
  std::int64_t srnn_fp = 0;
  std::int64_t srnn_bp = 0;
  double step_us = -1.0;  // FP+BP wall time per step; negative when untimed
};

struct ScalingFit {
  int n = 0;
  double slope = 0.0;
  bool near_linear = false;  // slope within [0.8, 1.2]
};

struct BenchReport {
  std::vector<FlopRow> rows;
  std::vector<ScalingFit> fits;
  std::vector<std::string> mismatches;
  std::vector<std::string> notes;

  bool passed() const { return mismatches.empty(); }
};

BenchReport RunBench(const BenchOptions& options);

inline constexpr const char* kFlopsHeader =
    "n,m,fp_flops,fp_closed_form,bp_flops,bp_closed_form,"
    "bp_recompute_flops,bp_recompute_closed_form,srnn_fp_flops,"
    "srnn_bp_flops,step_us";

void WriteFlopsCsv(std::ostream& out, const BenchReport& report);

std::string BenchJson(const BenchReport& report);

// ---- train ----

// Runs Train and, when out_dir is non-empty, writes metrics.csv,
// checkpoint.ornn (best evaluation) and report.json there.
TrainResult RunTrainCommand(const TrainConfig& config,
                            const std::string& out_dir, std::ostream* log);

std::string TrainJson(const TrainConfig& config, const TrainResult& result);

// ---- qr ----

struct QrCommandResult {
  int n = 0;
  bool orthogonal_mode = false;
  double reconstruction_error = 0.0;  // relative Frobenius error of Q R
  double orthogonality_error = 0.0;   // of the materialised Q
  Eigen::MatrixXd u;  // reflection vectors of Q, n x (n-1)
  double u1 = 1.0;
  Eigen::MatrixXd r;

  ReflectionStack stack() const { return ReflectionStack(n, u, u1); }
};

// General mode factors A = Q R; orthogonal mode requires A orthogonal and
// returns its reflection stack with R = I.
QrCommandResult RunQr(const Eigen::MatrixXd& a, bool orthogonal_mode);

std::string QrJson(const QrCommandResult& result);

// ---- lift ----

struct LiftOptions {
  int n = 4;
  int m = 3;
  std::uint64_t seed = 1;
  int steps = 5;
  int pairs = 50;
  int input_dim = 2;
  double tolerance = 1e-12;
};

struct LiftReport {
  double unitarity_error = 0.0;         // of the chain-built W
  double lifted_orthogonality = 0.0;    // of its real lift
  double action_error = 0.0;            // lift(W z) vs lift(W) lift(z)
  std::vector<double> step_errors;      // complex vs lifted real RNN
  double homomorphism_error = 0.0;      // lift(A B) vs lift(A) lift(B)
  double tolerance = 0.0;

  bool passed() const;
};

LiftReport RunLift(const LiftOptions& options);

std::string LiftJson(const LiftReport& report);

}  // namespace ornn

#endif  // ORNN_COMMANDS_H_
