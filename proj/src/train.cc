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

#include "ornn/train.h"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "ornn/error.h"
#include "ornn/flops.h"
#include "ornn/random.h"

namespace ornn {
namespace {

enum Stream : std::uint32_t { kInitStream = 0, kDataStream = 1, kEvalStream = 2 };

double ToDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("config key '" + key + "': expected a number, got '" +
                    value + "'");
}

long long ToInt(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError("config key '" + key + "': expected an integer, got '" +
                    value + "'");
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw FormatError("config key '" + key + "': expected a boolean, got '" +
                    value + "'");
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ApplyConfig(const ConfigMap& config, TrainConfig& out) {
  for (const auto& [key, value] : config) {
    if (key == "task") {
      out.task.kind = ParseTaskKind(value);
    } else if (key == "T") {
      out.task.length = static_cast<int>(ToInt(key, value));
    } else if (key == "batch") {
      out.task.batch = static_cast<int>(ToInt(key, value));
    } else if (key == "symbols") {
      out.task.symbols = static_cast<int>(ToInt(key, value));
    } else if (key == "payload") {
      out.task.payload = static_cast<int>(ToInt(key, value));
    } else if (key == "delay") {
      out.task.delay = static_cast<int>(ToInt(key, value));
    } else if (key == "components") {
      out.task.components = static_cast<int>(ToInt(key, value));
    } else if (key == "n") {
      out.n = static_cast<int>(ToInt(key, value));
    } else if (key == "m") {
      out.m = static_cast<int>(ToInt(key, value));
    } else if (key == "activation") {
      out.activation = ParseActivation(value);
    } else if (key == "lr") {
      out.adam.learning_rate = ToDouble(key, value);
      if (!(out.adam.learning_rate > 0.0)) {
        throw FormatError("learning rate must be positive");
      }
    } else if (key == "beta1") {
      out.adam.beta1 = ToDouble(key, value);
    } else if (key == "beta2") {
      out.adam.beta2 = ToDouble(key, value);
    } else if (key == "epsilon") {
      out.adam.epsilon = ToDouble(key, value);
    } else if (key == "seed") {
      out.seed = static_cast<std::uint64_t>(ToInt(key, value));
    } else if (key == "epochs") {
      out.epochs = static_cast<int>(ToInt(key, value));
    } else if (key == "batches_per_epoch") {
      out.batches_per_epoch = static_cast<int>(ToInt(key, value));
    } else if (key == "storage") {
      out.storage = ParseStorageMode(value);
    } else if (key == "eval_every") {
      out.eval_every = static_cast<int>(ToInt(key, value));
    } else if (key == "eval_batch") {
      out.eval_batch = static_cast<int>(ToInt(key, value));
    } else if (key == "target_metric") {
      out.target_metric = ToDouble(key, value);
    } else if (key == "record_wall_time") {
      out.record_wall_time = ToBool(key, value);
    } else {
      throw FormatError("unknown config key '" + key + "'");
    }
  }
}

TrainConfig ResolveTrainConfig(const TrainConfig& config) {
  TrainConfig out = config;
  out.task = ResolveDefaults(config.task);
  if (out.adam.learning_rate == 0.0) {
    out.adam.learning_rate = config.task.kind == TaskKind::kWaveform ? 1e-3 : 1e-2;
  }
  return out;
}

void ValidateTrainConfig(const TrainConfig& raw) {
  const TrainConfig c = ResolveTrainConfig(raw);
  ValidateTaskSpec(c.task);
  if (c.n < 1) throw FormatError("n must be positive");
  if (c.m < 1 || c.m > c.n) {
    throw FormatError("m must satisfy 1 <= m <= n (got m = " +
                      std::to_string(c.m) + ", n = " + std::to_string(c.n) +
                      ")");
  }
  if (!(c.adam.learning_rate > 0.0)) {
    throw FormatError("learning rate must be positive");
  }
  if (!(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0) ||
      !(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0) ||
      !(c.adam.epsilon > 0.0)) {
    throw FormatError("Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
  }
  if (c.epochs < 1 || c.batches_per_epoch < 1) {
    throw FormatError("epochs and batches_per_epoch must be positive");
  }
  if (c.eval_every < 1 || c.eval_batch < 1) {
    throw FormatError("eval_every and eval_batch must be positive");
  }
  if (c.activation == Activation::kModReluReal && c.n % 2 != 0) {
    throw FormatError("modrelu-real needs an even hidden size");
  }
}

std::string MetricName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kAddition:
      return "mse";
    case TaskKind::kCopy:
      return "cross-entropy";
    case TaskKind::kWaveform:
      return "nmse";
  }
  return "loss";
}

TrainResult Train(const TrainConfig& raw, std::ostream* metrics,
                  std::ostream* log) {
  ValidateTrainConfig(raw);
  const TrainConfig config = ResolveTrainConfig(raw);
  const bool fixed_data = config.task.kind == TaskKind::kWaveform;
  Rng init_rng = StreamRng(config.seed, kInitStream);
  Rng data_rng = StreamRng(config.seed, kDataStream);
  Rng eval_rng = StreamRng(config.seed, kEvalStream);

  TaskBatch fixed_batch;
  TaskBatch eval_batch;
  if (fixed_data) {
    fixed_batch = GenerateBatch(config.task, data_rng);
  } else {
    TaskSpec eval_spec = config.task;
    eval_spec.batch = config.eval_batch;
    eval_batch = GenerateBatch(eval_spec, eval_rng);
  }
  const TaskBatch& shape_source = fixed_data ? fixed_batch : eval_batch;

  TrainResult result;
  result.metric_name = MetricName(config.task.kind);
  OrnnParams params =
      InitOrnnParams(config.n, config.m, shape_source.input_dim,
                     shape_source.output_dim, config.activation, init_rng);
  AdamState adam = AdamState::ZerosLike(params);
  result.best_params = params;
  result.best_adam = adam;
  result.best_metric = std::numeric_limits<double>::infinity();

  if (metrics != nullptr) *metrics << kMetricsHeader << '\n';
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t total =
      static_cast<std::int64_t>(config.epochs) * config.batches_per_epoch;

  for (std::int64_t it = 1; it <= total; ++it) {
    const std::int64_t epoch = (it - 1) / config.batches_per_epoch + 1;
    TaskBatch fresh;
    if (!fixed_data) fresh = GenerateBatch(config.task, data_rng);
    const TaskBatch& batch = fixed_data ? fixed_batch : fresh;

    FlopCounter forward;
    FlopCounter backward;
    const BpttResult step =
        Bptt(params, batch, config.storage, &forward, &backward);
    result.flops += forward.total() + backward.total();
    try {
      AdamStep(params, step.grads, adam, config.adam);
    } catch (const DegenerateParameter& e) {
      throw DegenerateParameter("iteration " + std::to_string(it) + ": " +
                                e.what());
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("iteration " + std::to_string(it) + ": " +
                             e.what());
    }
    result.iterations = it;
    result.final_train_loss = step.loss;

    const bool evaluate = it % config.eval_every == 0 || it == total;
    double metric = 0.0;
    if (evaluate) {
      metric = fixed_data ? EvaluateNmse(params, fixed_batch)
                          : EvaluateLoss(params, eval_batch);
      result.final_metric = metric;
      if (metric < result.best_metric) {
        result.best_metric = metric;
        result.best_iteration = it;
        result.best_params = params;
        result.best_adam = adam;
      }
      if (log != nullptr) {
        *log << "iteration " << it << " train_loss " << FormatDouble(step.loss)
             << ' ' << result.metric_name << ' ' << FormatDouble(metric)
             << '\n';
      }
    }

    if (metrics != nullptr) {
      *metrics << it << ',' << epoch << ',' << FormatDouble(step.loss) << ',';
      if (evaluate) *metrics << FormatDouble(metric);
      *metrics << ',';
      if (config.record_wall_time) {
        const std::chrono::duration<double, std::milli> elapsed =
            std::chrono::steady_clock::now() - start;
        *metrics << FormatDouble(elapsed.count());
      }
      *metrics << ',' << result.flops << '\n';
    }

    if (evaluate && config.target_metric > 0.0 &&
        metric < config.target_metric) {
      result.reached_target = true;
      break;
    }
  }
  return result;
}

}  // namespace ornn
