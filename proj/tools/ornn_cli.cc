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

// Command line front end: gradcheck, train, bench, qr, lift.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ornn/commands.h"
#include "ornn/config.h"
#include "ornn/error.h"
#include "ornn/serialization.h"
#include "ornn/train.h"

namespace {

constexpr int kCheckFailed = 1;
constexpr int kError = 2;

void WriteText(const std::string& out_dir, const std::string& name,
               const std::string& text) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ornn::FormatError("cannot write " + path.string());
  out << text;
}

// Train flags recorded as config overrides so that a config file and the
// command line go through the same parser.
struct TrainFlags {
  std::string config_path;
  std::string out_dir;
  ornn::ConfigMap overrides;
};

void AddOverride(CLI::App* app, TrainFlags& flags, const std::string& flag,
                 const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag,
      [&flags, key](const std::string& value) { flags.overrides[key] = value; },
      help);
}

int RunTrain(const TrainFlags& flags) {
  ornn::ConfigMap merged;
  if (!flags.config_path.empty()) merged = ornn::LoadConfig(flags.config_path);
  for (const auto& [key, value] : flags.overrides) merged[key] = value;
  ornn::TrainConfig config;
  ornn::ApplyConfig(merged, config);
  ornn::ValidateTrainConfig(config);
  const ornn::TrainResult result =
      ornn::RunTrainCommand(config, flags.out_dir, &std::cerr);
  std::printf("final %s %.6g (best %.6g at iteration %lld, %lld iterations)\n",
              result.metric_name.c_str(), result.final_metric,
              result.best_metric, static_cast<long long>(result.best_iteration),
              static_cast<long long>(result.iterations));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Householder-parametrised orthogonal RNN toolkit"};
  app.require_subcommand(1);

  // gradcheck
  ornn::GradcheckOptions grad;
  std::string grad_out;
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Check the fused gradient kernel");
  gradcheck->add_option("--n", grad.sizes, "Hidden sizes")->delimiter(',');
  gradcheck->add_option("--m", grad.ms, "Reflection counts (default 1,n/2,n-1,n)")
      ->delimiter(',');
  gradcheck->add_option("--seeds", grad.seeds, "Seeds per (n, m)");
  gradcheck->add_option("--seed", grad.base_seed, "First seed");
  gradcheck->add_option("--reference", grad.reference_path,
                        "Reference vector file");
  gradcheck->add_flag("--inject-fault", grad.inject_fault,
                      "Flip the sign of one dU term (self test)");
  gradcheck->add_option("--out", grad_out, "Directory for report.json");

  // train
  TrainFlags train_flags;
  CLI::App* train = app.add_subcommand("train", "Train an oRNN on a task");
  train->add_option("--config", train_flags.config_path, "key=value file");
  train->add_option("--out", train_flags.out_dir, "Output directory");
  AddOverride(train, train_flags, "--task", "task", "addition|copy|waveform");
  AddOverride(train, train_flags, "--T", "T", "Sequence length");
  AddOverride(train, train_flags, "--n", "n", "Hidden size");
  AddOverride(train, train_flags, "--m", "m", "Number of reflections");
  AddOverride(train, train_flags, "--lr", "lr", "Learning rate");
  AddOverride(train, train_flags, "--batch", "batch", "Mini-batch size");
  AddOverride(train, train_flags, "--seed", "seed", "Run seed");
  AddOverride(train, train_flags, "--epochs", "epochs", "Number of epochs");
  AddOverride(train, train_flags, "--storage", "storage", "store|recompute");
  AddOverride(train, train_flags, "--activation", "activation",
              "leaky-relu|modrelu-real|identity");
  AddOverride(train, train_flags, "--batches-per-epoch", "batches_per_epoch",
              "Batches per epoch");
  AddOverride(train, train_flags, "--eval-every", "eval_every",
              "Iterations between evaluations");
  AddOverride(train, train_flags, "--eval-batch", "eval_batch",
              "Held-out sequences");
  AddOverride(train, train_flags, "--target", "target_metric",
              "Stop once the metric is below this");
  AddOverride(train, train_flags, "--symbols", "symbols", "Copy: alphabet");
  AddOverride(train, train_flags, "--payload", "payload", "Copy: payload");
  AddOverride(train, train_flags, "--delay", "delay", "Copy: delay");
  AddOverride(train, train_flags, "--components", "components",
              "Waveform: sinusoids");
  train->add_flag_callback(
      "--wall-time",
      [&train_flags] { train_flags.overrides["record_wall_time"] = "true"; },
      "Fill the wall_ms column");

  // bench
  ornn::BenchOptions bench_opts;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Flop counters and timing");
  bench->add_option("--n", bench_opts.ns, "Hidden sizes")->delimiter(',');
  bench->add_option("--m", bench_opts.ms, "Reflection counts (default 1..n-1)")
      ->delimiter(',');
  bench->add_option("--steps", bench_opts.steps, "Time steps per count");
  bench->add_flag("--time", bench_opts.timing, "Measure wall-clock per step");
  bench->add_option("--min-ms", bench_opts.min_time_ms,
                    "Minimum timing window per cell");
  bench->add_option("--seed", bench_opts.seed, "Seed");
  bench->add_option("--out", bench_out, "Directory for flops.csv/report.json");

  // qr
  std::string qr_in;
  std::string qr_out;
  bool qr_orthogonal = false;
  CLI::App* qr = app.add_subcommand("qr", "Householder QR of a matrix file");
  qr->add_option("--in", qr_in, "Text matrix file")->required();
  qr->add_flag("--orthogonal", qr_orthogonal,
               "Input is orthogonal; return its reflection stack");
  qr->add_option("--out", qr_out, "Directory for stack.ornn, r.txt, q.txt");

  // lift
  ornn::LiftOptions lift_opts;
  std::string lift_out;
  CLI::App* lift = app.add_subcommand("lift", "Unitary to real lift checks");
  lift->add_option("--n", lift_opts.n, "Complex size");
  lift->add_option("--m", lift_opts.m, "Complex reflections (<= n-1)");
  lift->add_option("--seed", lift_opts.seed, "Seed");
  lift->add_option("--steps", lift_opts.steps, "RNN steps");
  lift->add_option("--pairs", lift_opts.pairs, "Homomorphism pairs");
  lift->add_option("--out", lift_out, "Directory for report.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gradcheck) {
      const ornn::GradcheckReport report = ornn::RunGradcheck(grad);
      for (const ornn::SuiteResult& s : report.suites) {
        std::printf("%-12s %s  cases %d  worst %.3e (%s)  tol %.0e\n",
                    s.name.c_str(), s.passed() ? "PASS" : "FAIL", s.cases,
                    s.worst, s.worst_case.c_str(), s.tolerance);
        for (const std::string& f : s.failures) {
          std::printf("  %s\n", f.c_str());
        }
      }
      if (!grad_out.empty()) {
        WriteText(grad_out, "report.json", ornn::GradcheckJson(report));
      }
      return report.passed() ? 0 : kCheckFailed;
    }
    if (*train) return RunTrain(train_flags);
    if (*bench) {
      const ornn::BenchReport report = ornn::RunBench(bench_opts);
      ornn::WriteFlopsCsv(std::cout, report);
      for (const ornn::ScalingFit& f : report.fits) {
        std::fprintf(stderr, "n=%d log-log slope of time in m: %.3f%s\n", f.n,
                     f.slope, f.near_linear ? "" : " (outside [0.8, 1.2])");
      }
      for (const std::string& m : report.mismatches) {
        std::fprintf(stderr, "mismatch: %s\n", m.c_str());
      }
      if (!bench_out.empty()) {
        std::ostringstream csv;
        ornn::WriteFlopsCsv(csv, report);
        WriteText(bench_out, "flops.csv", csv.str());
        WriteText(bench_out, "report.json", ornn::BenchJson(report));
      }
      return report.passed() ? 0 : kCheckFailed;
    }
    if (*qr) {
      const ornn::QrCommandResult result =
          ornn::RunQr(ornn::LoadTextMatrix(qr_in), qr_orthogonal);
      std::printf("n %d  u1 %+g  reconstruction %.3e  orthogonality %.3e\n",
                  result.n, result.u1, result.reconstruction_error,
                  result.orthogonality_error);
      if (!qr_out.empty()) {
        std::filesystem::create_directories(qr_out);
        const std::filesystem::path dir(qr_out);
        ornn::SaveStack((dir / "stack.ornn").string(), result.stack());
        ornn::SaveTextMatrix((dir / "r.txt").string(), result.r);
        ornn::SaveTextMatrix((dir / "q.txt").string(),
                             ornn::Materialize(result.stack()));
        WriteText(qr_out, "report.json", ornn::QrJson(result));
      }
      return 0;
    }
    if (*lift) {
      const ornn::LiftReport report = ornn::RunLift(lift_opts);
      std::printf(
          "unitarity %.3e  lifted orthogonality %.3e  action %.3e  "
          "homomorphism %.3e\n",
          report.unitarity_error, report.lifted_orthogonality,
          report.action_error, report.homomorphism_error);
      for (std::size_t t = 0; t < report.step_errors.size(); ++t) {
        std::printf("step %zu  complex vs real %.3e\n", t + 1,
                    report.step_errors[t]);
      }
      if (!lift_out.empty()) {
        WriteText(lift_out, "report.json", ornn::LiftJson(report));
      }
      return report.passed() ? 0 : kCheckFailed;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return 0;
}
