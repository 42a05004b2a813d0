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

#ifndef ORNN_TRAIN_H_
#define ORNN_TRAIN_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ornn/bptt.h"
#include "ornn/config.h"
#include "ornn/model.h"
#include "ornn/optimizer.h"
#include "ornn/tasks.h"

namespace ornn {

struct TrainConfig {
  TaskSpec task;  // task.batch is the mini-batch size
  int n = 64;
  int m = 16;
  Activation activation = Activation::kLeakyRelu;
  // learning_rate 0 selects the task preset: 1e-2 for addition and copy,
  // 1e-3 for waveform.
  AdamConfig adam{.learning_rate = 0.0};
  std::uint64_t seed = 1;
  int epochs = 1000;
  // Fresh batches per epoch for the generated tasks; the waveform task always
  // trains on one fixed batch per epoch.
  int batches_per_epoch = 1;
  StorageMode storage = StorageMode::kStoreTapes;
  int eval_every = 100;
  int eval_batch = 500;
  // Stop as soon as the evaluation metric drops below this (0 disables).
  double target_metric = 0.0;
  // Wall-clock column of metrics.csv; off by default so that the file is a
  // pure function of the configuration.
  bool record_wall_time = false;
};

// Applies recognised keys; throws FormatError on unknown keys or bad values.
// Keys: task, T, batch, n, m, activation, lr, beta1, beta2, epsilon, seed,
// epochs, batches_per_epoch, storage, eval_every, eval_batch, target_metric,
// record_wall_time, symbols, payload, delay, components.
void ApplyConfig(const ConfigMap& config, TrainConfig& out);

// Fills task defaults (sequence length, batch) and the learning-rate preset.
TrainConfig ResolveTrainConfig(const TrainConfig& config);

// Throws FormatError for unusable settings (lr <= 0, m outside [1, n], ...).
void ValidateTrainConfig(const TrainConfig& config);

// Name of the evaluation metric: "mse" (addition), "cross-entropy" (copy) or
// "nmse" (waveform).
std::string MetricName(TaskKind kind);

struct TrainResult {
  std::int64_t iterations = 0;
  double final_train_loss = 0.0;
  double final_metric = 0.0;
  double best_metric = 0.0;
  std::int64_t best_iteration = 0;
  bool reached_target = false;
  std::int64_t flops = 0;
  std::string metric_name;
  OrnnParams best_params;
  AdamState best_adam;
};

// Header of the per-iteration metrics stream.
inline constexpr const char* kMetricsHeader =
    "iteration,epoch,train_loss,eval_metric,wall_ms,flops";

// Runs Adam with constraint projection on freshly generated batches. Writes
// one CSV row per iteration to `metrics` when non-null; the eval_metric cell
// is filled every eval_every iterations and on the last one. A collapsed
// reflection vector aborts with DegenerateParameter naming the iteration.
TrainResult Train(const TrainConfig& config, std::ostream* metrics = nullptr,
                  std::ostream* log = nullptr);

}  // namespace ornn

#endif  // ORNN_TRAIN_H_
