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

#include "ornn/tasks.h"

#include <cmath>
#include <numbers>

#include "ornn/error.h"

namespace ornn {

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "addition") return TaskKind::kAddition;
  if (name == "copy") return TaskKind::kCopy;
  if (name == "waveform") return TaskKind::kWaveform;
  throw FormatError("unknown task '" + std::string(name) + "'");
}

std::string TaskName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kAddition:
      return "addition";
    case TaskKind::kCopy:
      return "copy";
    case TaskKind::kWaveform:
      return "waveform";
  }
  return "?";
}

TaskSpec ResolveDefaults(const TaskSpec& spec) {
  TaskSpec out = spec;
  const bool waveform = spec.kind == TaskKind::kWaveform;
  if (out.length == 0) out.length = waveform ? 800 : 100;
  if (out.batch == 0) out.batch = waveform ? 1 : 50;
  return out;
}

void ValidateTaskSpec(const TaskSpec& raw) {
  const TaskSpec spec = ResolveDefaults(raw);
  if (spec.batch < 1) throw FormatError("task batch must be >= 1");
  switch (spec.kind) {
    case TaskKind::kAddition:
      if (spec.length < 4) {
        throw FormatError("addition task needs length >= 4, got " +
                          std::to_string(spec.length));
      }
      break;
    case TaskKind::kCopy:
      if (spec.symbols < 2 || spec.payload < 1 || spec.delay < 1) {
        throw FormatError("copy task needs K >= 2, L >= 1, D >= 1");
      }
      break;
    case TaskKind::kWaveform:
      if (spec.length < 2 || spec.components < 1) {
        throw FormatError("waveform task needs length >= 2 and components >= 1");
      }
      break;
  }
}

void CheckBatch(const TaskBatch& batch) {
  const auto count = batch.inputs.size();
  if (count == 0) throw ShapeError("TaskBatch: empty batch");
  for (const auto& x : batch.inputs) {
    if (x.rows() != batch.input_dim || x.cols() != batch.steps) {
      throw ShapeError("TaskBatch: input shape mismatch");
    }
  }
  if (batch.loss == LossKind::kMse) {
    if (batch.targets.size() != count) {
      throw ShapeError("TaskBatch: one target matrix per sequence expected");
    }
    for (const auto& y : batch.targets) {
      if (y.rows() != batch.output_dim || y.cols() != batch.scored_steps()) {
        throw ShapeError("TaskBatch: target shape mismatch");
      }
    }
  } else {
    if (batch.labels.size() != count) {
      throw ShapeError("TaskBatch: one label vector per sequence expected");
    }
    for (const auto& l : batch.labels) {
      if (static_cast<int>(l.size()) != batch.scored_steps()) {
        throw ShapeError("TaskBatch: label count mismatch");
      }
      for (int label : l) {
        if (label < 0 || label >= batch.output_dim) {
          throw ShapeError("TaskBatch: label out of range");
        }
      }
    }
  }
}

TaskBatch GenerateAddition(const TaskSpec& raw, Rng& rng) {
  ValidateTaskSpec(raw);
  const TaskSpec spec = ResolveDefaults(raw);
  const int steps = spec.length;
  const int half = steps / 2;
  TaskBatch batch;
  batch.steps = steps;
  batch.input_dim = 2;
  batch.output_dim = 1;
  batch.loss = LossKind::kMse;
  batch.last_step_only = true;
  for (int s = 0; s < spec.batch; ++s) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, steps);
    for (int t = 0; t < steps; ++t) x(0, t) = UniformUnit(rng);
    const auto first = UniformInt(rng, 0, half - 1);
    const auto second = UniformInt(rng, half, steps - 1);
    x(1, first) = 1.0;
    x(1, second) = 1.0;
    Eigen::MatrixXd y(1, 1);
    y(0, 0) = x(0, first) + x(0, second);
    batch.inputs.push_back(std::move(x));
    batch.targets.push_back(std::move(y));
  }
  return batch;
}

TaskBatch GenerateCopy(const TaskSpec& raw, Rng& rng) {
  ValidateTaskSpec(raw);
  const TaskSpec spec = ResolveDefaults(raw);
  const int k = spec.symbols;
  const int l = spec.payload;
  const int d = spec.delay;
  const int steps = 2 * l + d;
  const int blank = k;
  const int go = k + 1;
  TaskBatch batch;
  batch.steps = steps;
  batch.input_dim = k + 2;
  batch.output_dim = k + 1;
  batch.loss = LossKind::kCrossEntropy;
  batch.last_step_only = false;
  for (int s = 0; s < spec.batch; ++s) {
    std::vector<int> in(steps, blank);
    std::vector<int> out(steps, blank);
    for (int i = 0; i < l; ++i) {
      const int symbol = static_cast<int>(UniformInt(rng, 0, k - 1));
      in[i] = symbol;
      out[l + d + i] = symbol;
    }
    in[l + d - 1] = go;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k + 2, steps);
    for (int t = 0; t < steps; ++t) x(in[t], t) = 1.0;
    batch.inputs.push_back(std::move(x));
    batch.labels.push_back(std::move(out));
  }
  return batch;
}

TaskBatch GenerateWaveform(const TaskSpec& raw, Rng& rng) {
  ValidateTaskSpec(raw);
  const TaskSpec spec = ResolveDefaults(raw);
  const int steps = spec.length;
  TaskBatch batch;
  batch.steps = steps;
  batch.input_dim = 1;
  batch.output_dim = 1;
  batch.loss = LossKind::kMse;
  batch.last_step_only = false;
  for (int s = 0; s < spec.batch; ++s) {
    Eigen::VectorXd wave = Eigen::VectorXd::Zero(steps);
    for (int c = 0; c < spec.components; ++c) {
      const double amplitude = spec.components == 1 ? 1.0 : Uniform(rng, 0.2, 1.0);
      // Between 4 and 20 periods over an 800-step sequence.
      const double freq = Uniform(rng, 1.0 / 200.0, 1.0 / 40.0);
      const double phase = Uniform(rng, 0.0, 2.0 * std::numbers::pi);
      for (int t = 0; t < steps; ++t) {
        wave[t] += amplitude * std::sin(2.0 * std::numbers::pi * freq * t + phase);
      }
    }
    wave.array() -= wave.mean();
    const double peak = wave.cwiseAbs().maxCoeff();
    if (peak > 0.0) wave /= peak;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, steps);
    x(0, 0) = 1.0;
    batch.inputs.push_back(std::move(x));
    batch.targets.push_back(wave.transpose());
  }
  return batch;
}

TaskBatch GenerateBatch(const TaskSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case TaskKind::kAddition:
      return GenerateAddition(spec, rng);
    case TaskKind::kCopy:
      return GenerateCopy(spec, rng);
    case TaskKind::kWaveform:
      return GenerateWaveform(spec, rng);
  }
  throw FormatError("unknown task kind");
}

TaskBatch GenerateBatch(const TaskSpec& spec) {
  Rng rng(spec.seed);
  return GenerateBatch(spec, rng);
}

double CopyBaselineCrossEntropy(const TaskSpec& spec) {
  ValidateTaskSpec(spec);
  const double l = spec.payload;
  return l * std::log(static_cast<double>(spec.symbols)) /
         (2.0 * l + spec.delay);
}

}  // namespace ornn
