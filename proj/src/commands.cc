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

#include "ornn/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"
#include "ornn/backprop.h"
#include "ornn/error.h"
#include "ornn/flops.h"
#include "ornn/householder.h"
#include "ornn/serialization.h"
#include "ornn/unitary.h"

namespace ornn {
namespace {

using nlohmann::json;

Rng CaseRng(std::uint64_t seed, int n, int m) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)};
  return Rng(seq);
}

Eigen::VectorXd RandomVector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = Uniform(rng, -1.0, 1.0);
  return v;
}

std::string Describe(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void Record(SuiteResult& suite, double error, const std::string& label) {
  ++suite.cases;
  if (suite.cases == 1 || !(error <= suite.worst)) {
    suite.worst = error;
    suite.worst_case = label;
  }
  if (!(error <= suite.tolerance)) {
    suite.failures.push_back(label + ": relative error " + Describe(error) +
                             " exceeds " + Describe(suite.tolerance));
  }
}

std::vector<int> DefaultMs(int n) {
  std::set<int> ms = {1, n / 2, n - 1, n};
  std::vector<int> out;
  for (int m : ms) {
    if (m >= 1 && m <= n) out.push_back(m);
  }
  return out;
}

json SuiteJson(const SuiteResult& s) {
  return json{{"name", s.name},       {"cases", s.cases},
              {"tolerance", s.tolerance}, {"worst_relative_error", s.worst},
              {"worst_case", s.worst_case}, {"passed", s.passed()},
              {"failures", s.failures}};
}

}  // namespace

double ScaledError(const Eigen::MatrixXd& actual,
                   const Eigen::MatrixXd& expected, double floor) {
  if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
    throw ShapeError("ScaledError: shapes differ");
  }
  if (actual.size() == 0) return 0.0;
  const double diff = (actual - expected).cwiseAbs().maxCoeff();
  const double scale = std::max(expected.cwiseAbs().maxCoeff(), floor);
  return diff / scale;
}

bool GradcheckReport::passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.passed(); });
}

GradcheckReport RunGradcheck(const GradcheckOptions& options) {
  SuiteResult formula;
  formula.name = "formula";
  formula.tolerance = options.formula_tolerance;
  SuiteResult finite;
  finite.name = "finite-diff";
  finite.tolerance = options.finite_diff_tolerance;
  SuiteResult transpose;
  transpose.name = "transpose";
  transpose.tolerance = options.formula_tolerance;
  for (int n : options.sizes) {
    if (n < 1) throw PreconditionError("gradcheck: n must be positive");
    const std::vector<int> ms = options.ms.empty() ? DefaultMs(n) : options.ms;
    for (int m : ms) {
      if (m < 1 || m > n) continue;
      for (int k = 0; k < options.seeds; ++k) {
        const std::uint64_t seed = options.base_seed + k;
        Rng rng = CaseRng(seed, n, m);
        const ReflectionStack stack = RandomStack(n, m, rng);
        const Eigen::VectorXd h = RandomVector(n, rng);
        const Eigen::VectorXd gc = RandomVector(n, rng);
        LocalStep kernel = LocalFpBp(stack, h, gc);
        if (options.inject_fault) {
          kernel.grads.du += 2.0 * h * kernel.grads.c_tilde.transpose();
          ZeroStructuralEntries(kernel.grads.du);
        }
        const std::string label = "n=" + std::to_string(n) +
                                  " m=" + std::to_string(m) +
                                  " seed=" + std::to_string(seed);

        if (!stack.has_sign_factor()) {
          const GradientBundle dense = GradFormulas(stack, h, gc);
          const double err =
              std::max(ScaledError(kernel.grads.du, dense.du, 1e-300),
                       ScaledError(kernel.grads.dh, dense.dh, 1e-300));
          Record(formula, err, label);
        }

        const GradientBundle fd = FiniteDiffGrad(stack, h, gc);
        Record(finite,
               std::max(ScaledError(kernel.grads.du, fd.du, 1e-2),
                        ScaledError(kernel.grads.dh, fd.dh, 1e-2)),
               label);

        const Eigen::VectorXd wt = Materialize(stack).transpose() * gc;
        Record(transpose, ScaledError(kernel.grads.dh, wt, 1e-300), label);
      }
    }
  }

  GradcheckReport report;
  report.suites = {formula, finite, transpose};
  if (!options.reference_path.empty()) {
    SuiteResult reference;
    reference.name = "reference";
    reference.tolerance = options.reference_tolerance;
    const std::vector<ReferenceCase> cases =
        LoadReferenceCases(options.reference_path);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const ReferenceCase& rc = cases[i];
      const ReflectionStack stack(static_cast<int>(rc.u.cols()), rc.u);
      LocalStep kernel = LocalFpBp(stack, rc.h, rc.grad_c);
      if (options.inject_fault) {
        kernel.grads.du += 2.0 * rc.h * kernel.grads.c_tilde.transpose();
        ZeroStructuralEntries(kernel.grads.du);
      }
      // Entries above each column's support are not parameters.
      Eigen::MatrixXd expected_du = rc.du;
      ZeroStructuralEntries(expected_du);
      const double err =
          std::max({ScaledError(kernel.c, rc.c, 1.0),
                    ScaledError(kernel.grads.dh, rc.g, 1.0),
                    ScaledError(kernel.grads.du, expected_du, 1.0)});
      Record(reference, err,
             "vector " + std::to_string(i) + " (n=" +
                 std::to_string(rc.u.rows()) +
                 " m=" + std::to_string(rc.u.cols()) + ")");
    }
    report.suites.push_back(reference);
  }
  return report;
}

std::string GradcheckJson(const GradcheckReport& report) {
  json suites = json::array();
  for (const SuiteResult& s : report.suites) suites.push_back(SuiteJson(s));
  json out{{"schema_version", kReportSchemaVersion},
           {"command", "gradcheck"},
           {"passed", report.passed()},
           {"suites", suites}};
  return out.dump(2) + "\n";
}

// ---- bench ----

namespace {

TaskBatch BenchBatch(int steps, Rng& rng) {
  TaskBatch batch;
  batch.steps = steps;
  batch.input_dim = 1;
  batch.output_dim = 1;
  batch.loss = LossKind::kMse;
  Eigen::MatrixXd x(1, steps);
  Eigen::MatrixXd y(1, steps);
  for (int t = 0; t < steps; ++t) {
    x(0, t) = Uniform(rng, -1.0, 1.0);
    y(0, t) = Uniform(rng, -1.0, 1.0);
  }
  batch.inputs.push_back(x);
  batch.targets.push_back(y);
  return batch;
}

void ExpectCount(BenchReport& report, int n, int m, const char* phase,
                 const char* formula, std::int64_t measured,
                 std::int64_t expected) {
  if (measured == expected) return;
  report.mismatches.push_back(
      std::string(phase) + " n=" + std::to_string(n) +
      " m=" + std::to_string(m) + ": counted " + std::to_string(measured) +
      ", " + formula + " gives " + std::to_string(expected));
}

double TimeStepUs(const ReflectionStack& stack, Rng& rng, double min_ms) {
  const Eigen::VectorXd h = RandomVector(stack.n(), rng);
  const Eigen::VectorXd gc = RandomVector(stack.n(), rng);
  using Clock = std::chrono::steady_clock;
  double sink = 0.0;
  std::int64_t reps = 0;
  const auto start = Clock::now();
  std::chrono::duration<double, std::milli> elapsed{0};
  ForwardTape tape;
  do {
    const Eigen::VectorXd c = ChainMatvec(stack, h, &tape);
    const GradientBundle grads = ChainBackward(stack, tape, gc);
    sink += c[0] + grads.dh[0];
    ++reps;
    elapsed = Clock::now() - start;
  } while (elapsed.count() < min_ms);
  // Keep the loop observable.
  if (sink == 12345.678) std::fputs("", stderr);
  return elapsed.count() * 1000.0 / static_cast<double>(reps);
}

}  // namespace

BenchReport RunBench(const BenchOptions& options) {
  if (options.ns.empty()) throw PreconditionError("bench: empty n list");
  if (options.steps < 1) throw PreconditionError("bench: steps must be >= 1");
  BenchReport report;
  for (int n : options.ns) {
    if (n < 2) throw PreconditionError("bench: n must be at least 2");
    std::vector<int> ms = options.ms;
    if (ms.empty()) {
      for (int m = 1; m < n; ++m) ms.push_back(m);
    }
    Rng rng = CaseRng(options.seed, n, 0);
    const Eigen::MatrixXd dense = Eigen::MatrixXd::Identity(n, n);
    FlopCounter dense_fp;
    FlopCounter dense_bp;
    const Eigen::VectorXd probe = RandomVector(n, rng);
    DenseMatvec(dense, probe, &dense_fp);
    Eigen::MatrixXd dense_grad;
    DenseBackward(dense, probe, probe, &dense_grad, &dense_bp);
    ExpectCount(report, n, 0, "sRNN FP", "2n^2-n", dense_fp.total(),
                DenseForwardFlops(n));
    ExpectCount(report, n, 0, "sRNN BP", "3n^2-n", dense_bp.total(),
                DenseBackwardFlops(n));

    std::vector<std::pair<double, double>> timed;
    for (int m : ms) {
      if (m < 1 || m >= n) {
        report.notes.push_back("skipped n=" + std::to_string(n) +
                               " m=" + std::to_string(m) +
                               ": closed forms cover 1 <= m <= n-1");
        continue;
      }
      OrnnParams params =
          InitOrnnParams(n, m, 1, 1, Activation::kLeakyRelu, rng);
      const TaskBatch batch = BenchBatch(options.steps, rng);
      FlopCounter fp, bp, fp_again, bp_recompute;
      Bptt(params, batch, StorageMode::kStoreTapes, &fp, &bp);
      Bptt(params, batch, StorageMode::kRecomputeTapes, &fp_again,
           &bp_recompute);
      const std::int64_t steps = options.steps;
      ExpectCount(report, n, m, "FP", "(4n-m+2)m", fp.total(),
                  steps * ForwardFlops(n, m));
      ExpectCount(report, n, m, "BP", "(7n-2m+3)m", bp.total(),
                  steps * BackwardFlops(n, m));
      ExpectCount(report, n, m, "BP recompute", "(11n-3m+5)m",
                  bp_recompute.total(), steps * RecomputeBackwardFlops(n, m));

      FlopRow row;
      row.n = n;
      row.m = m;
      row.fp = fp.total() / steps;
      row.bp = bp.total() / steps;
      row.bp_recompute = bp_recompute.total() / steps;
      row.srnn_fp = dense_fp.total();
      row.srnn_bp = dense_bp.total();
      if (options.timing) {
        row.step_us = TimeStepUs(params.stack(), rng, options.min_time_ms);
        timed.emplace_back(std::log(m), std::log(row.step_us));
      }
      report.rows.push_back(row);
    }
    if (timed.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (const auto& [x, y] : timed) {
        mx += x;
        my += y;
      }
      mx /= timed.size();
      my /= timed.size();
      double sxy = 0.0, sxx = 0.0;
      for (const auto& [x, y] : timed) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
      }
      if (sxx > 0.0) {
        const double slope = sxy / sxx;
        report.fits.push_back(
            ScalingFit{n, slope, slope >= 0.8 && slope <= 1.2});
      }
    }
  }
  return report;
}

void WriteFlopsCsv(std::ostream& out, const BenchReport& report) {
  out << kFlopsHeader << '\n';
  for (const FlopRow& r : report.rows) {
    out << r.n << ',' << r.m << ',' << r.fp << ',' << ForwardFlops(r.n, r.m)
        << ',' << r.bp << ',' << BackwardFlops(r.n, r.m) << ','
        << r.bp_recompute << ',' << RecomputeBackwardFlops(r.n, r.m) << ','
        << r.srnn_fp << ',' << r.srnn_bp << ',';
    if (r.step_us >= 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", r.step_us);
      out << buf;
    }
    out << '\n';
  }
}

std::string BenchJson(const BenchReport& report) {
  json fits = json::array();
  for (const ScalingFit& f : report.fits) {
    fits.push_back({{"n", f.n},
                    {"log_log_slope", f.slope},
                    {"near_linear", f.near_linear}});
  }
  // Ratios of measured counts against the asymptotic 3n^2 / 5n^2 per step
  // quoted for m close to n.
  json asymptotic = json::array();
  for (const FlopRow& r : report.rows) {
    if (r.m != r.n - 1) continue;
    const double n2 = static_cast<double>(r.n) * r.n;
    asymptotic.push_back({{"n", r.n},
                          {"m", r.m},
                          {"fp_over_3n2", r.fp / (3.0 * n2)},
                          {"bp_over_5n2", r.bp / (5.0 * n2)}});
  }
  json out{{"schema_version", kReportSchemaVersion},
           {"command", "bench"},
           {"passed", report.passed()},
           {"rows", report.rows.size()},
           {"mismatches", report.mismatches},
           {"notes", report.notes},
           {"scaling_fits", fits},
           {"asymptotic_ratios", asymptotic}};
  return out.dump(2) + "\n";
}

// ---- train ----

TrainResult RunTrainCommand(const TrainConfig& config,
                            const std::string& out_dir, std::ostream* log) {
  if (out_dir.empty()) return Train(config, nullptr, log);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::ofstream metrics(dir / "metrics.csv", std::ios::binary);
  if (!metrics) {
    throw FormatError("cannot write " + (dir / "metrics.csv").string());
  }
  TrainResult result = Train(config, &metrics, log);
  metrics.close();
  SaveCheckpoint((dir / "checkpoint.ornn").string(), result.best_params,
                 result.best_adam);
  std::ofstream report(dir / "report.json", std::ios::binary);
  report << TrainJson(config, result);
  return result;
}

std::string TrainJson(const TrainConfig& raw, const TrainResult& r) {
  const TrainConfig c = ResolveTrainConfig(raw);
  json config{{"task", TaskName(c.task.kind)},
              {"T", c.task.length},
              {"batch", c.task.batch},
              {"n", c.n},
              {"m", c.m},
              {"activation", ActivationName(c.activation)},
              {"lr", c.adam.learning_rate},
              {"beta1", c.adam.beta1},
              {"beta2", c.adam.beta2},
              {"epsilon", c.adam.epsilon},
              {"seed", c.seed},
              {"epochs", c.epochs},
              {"batches_per_epoch", c.batches_per_epoch},
              {"storage", StorageModeName(c.storage)},
              {"eval_every", c.eval_every},
              {"eval_batch", c.eval_batch},
              {"target_metric", c.target_metric}};
  json out{{"schema_version", kReportSchemaVersion},
           {"command", "train"},
           {"config", config},
           {"metric", r.metric_name},
           {"iterations", r.iterations},
           {"final_train_loss", r.final_train_loss},
           {"final_metric", r.final_metric},
           {"best_metric", r.best_metric},
           {"best_iteration", r.best_iteration},
           {"reached_target", r.reached_target},
           {"hidden_flops", r.flops}};
  return out.dump(2) + "\n";
}

// ---- qr ----

QrCommandResult RunQr(const Eigen::MatrixXd& a, bool orthogonal_mode) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ShapeError("qr: input must be a nonempty square matrix");
  }
  QrCommandResult out;
  out.n = static_cast<int>(a.rows());
  out.orthogonal_mode = orthogonal_mode;
  if (orthogonal_mode) {
    const ReflectionStack q = DecomposeOrthogonal(a);
    out.u = q.u();
    out.u1 = q.u1();
    out.r = Eigen::MatrixXd::Identity(out.n, out.n);
  } else {
    const QrResult qr = QrDecompose(a);
    out.u = qr.q.u();
    out.u1 = qr.q.u1();
    out.r = qr.r;
  }
  const Eigen::MatrixXd q = Materialize(out.stack());
  out.orthogonality_error = OrthogonalityError(q);
  out.reconstruction_error = (q * out.r - a).norm() / a.norm();
  return out;
}

std::string QrJson(const QrCommandResult& r) {
  json out{{"schema_version", kReportSchemaVersion},
           {"command", "qr"},
           {"n", r.n},
           {"mode", r.orthogonal_mode ? "orthogonal" : "general"},
           {"u1", r.u1},
           {"reconstruction_error", r.reconstruction_error},
           {"orthogonality_error", r.orthogonality_error}};
  return out.dump(2) + "\n";
}

// ---- lift ----

bool LiftReport::passed() const {
  const double worst_step =
      step_errors.empty()
          ? 0.0
          : *std::max_element(step_errors.begin(), step_errors.end());
  return unitarity_error < tolerance && lifted_orthogonality < tolerance &&
         action_error < tolerance && worst_step < tolerance &&
         homomorphism_error < tolerance;
}

LiftReport RunLift(const LiftOptions& o) {
  if (o.n < 1 || o.m < 0 || o.m > o.n - 1) {
    throw PreconditionError("lift: need n >= 1 and 0 <= m <= n-1");
  }
  Rng rng = CaseRng(o.seed, o.n, o.m);
  auto complex_matrix = [&rng](int rows, int cols) {
    Eigen::MatrixXcd z(rows, cols);
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < rows; ++i) {
        const double re = Uniform(rng, -1.0, 1.0);
        z(i, j) = {re, Uniform(rng, -1.0, 1.0)};
      }
    }
    return z;
  };

  LiftReport report;
  report.tolerance = o.tolerance;
  const ComplexReflectionStack stack = RandomComplexStack(o.n, o.m, rng);
  const Eigen::MatrixXcd w = MaterializeUnitary(stack);
  const Eigen::MatrixXd lifted = LiftToReal(w);
  report.unitarity_error = UnitarityError(w);
  report.lifted_orthogonality = OrthogonalityError(lifted);

  const Eigen::VectorXcd z = complex_matrix(o.n, 1).col(0);
  report.action_error = (LiftVector(UnitaryChainMatvec(stack, z)) -
                         lifted * LiftVector(z))
                            .cwiseAbs()
                            .maxCoeff();

  const Eigen::MatrixXcd v = complex_matrix(o.n, o.input_dim);
  const Eigen::MatrixXd v_real = LiftInputMatrix(v);
  Eigen::VectorXd bias(o.n);
  for (int i = 0; i < o.n; ++i) bias[i] = Uniform(rng, -0.5, 0.5);
  Eigen::VectorXcd hc = Eigen::VectorXcd::Zero(o.n);
  Eigen::VectorXd hr = Eigen::VectorXd::Zero(2 * o.n);
  for (int t = 0; t < o.steps; ++t) {
    const Eigen::VectorXd x = RandomVector(o.input_dim, rng);
    hc = ModRelu(UnitaryChainMatvec(stack, hc) + v * x.cast<std::complex<double>>(),
                 bias);
    hr = ModReluReal(lifted * hr + v_real * x, bias);
    report.step_errors.push_back((LiftVector(hc) - hr).cwiseAbs().maxCoeff());
  }

  for (int p = 0; p < o.pairs; ++p) {
    const Eigen::MatrixXcd a = complex_matrix(o.n, o.n);
    const Eigen::MatrixXcd b = complex_matrix(o.n, o.n);
    const double err =
        (LiftToReal(a * b) - LiftToReal(a) * LiftToReal(b)).cwiseAbs().maxCoeff();
    report.homomorphism_error = std::max(report.homomorphism_error, err);
  }
  return report;
}

std::string LiftJson(const LiftReport& r) {
  json out{{"schema_version", kReportSchemaVersion},
           {"command", "lift"},
           {"passed", r.passed()},
           {"tolerance", r.tolerance},
           {"unitarity_error", r.unitarity_error},
           {"lifted_orthogonality_error", r.lifted_orthogonality},
           {"action_error", r.action_error},
           {"rnn_step_errors", r.step_errors},
           {"homomorphism_error", r.homomorphism_error}};
  return out.dump(2) + "\n";
}

}  // namespace ornn
