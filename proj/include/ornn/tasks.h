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

#ifndef ORNN_TASKS_H_
#define ORNN_TASKS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ornn/model.h"
#include "ornn/random.h"

namespace ornn {

enum class TaskKind { kAddition, kCopy, kWaveform };

TaskKind ParseTaskKind(std::string_view name);
std::string TaskName(TaskKind kind);

struct TaskSpec {
  TaskKind kind = TaskKind::kAddition;
  // 0 selects the task default: length 100 (addition) or 800 (waveform),
  // batch 50 (addition, copy) or 1 (waveform, one excerpt per model).
  int length = 0;  // addition and waveform sequence length
  int batch = 0;
  std::uint64_t seed = 1;
  // Copy task: K symbols, L payload symbols, delay D. The sequence has
  // 2L + D steps and K + 2 input channels (symbols, blank, go).
  int symbols = 8;
  int payload = 10;
  int delay = 20;
  // Waveform task: number of sinusoids in the mixture.
  int components = 3;
};

// Throws FormatError for invalid dimensions.
// Zero length/batch replaced by the task defaults.
TaskSpec ResolveDefaults(const TaskSpec& spec);

// Validates the resolved spec.
void ValidateTaskSpec(const TaskSpec& spec);

// One batch of sequences. Inputs are input_dim x steps per sequence. Scored
// outputs are either every step or only the last one; MSE targets are
// output_dim x scored steps, cross-entropy labels one per scored step.
struct TaskBatch {
  int steps = 0;
  int input_dim = 0;
  int output_dim = 0;
  LossKind loss = LossKind::kMse;
  bool last_step_only = false;
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> targets;
  std::vector<std::vector<int>> labels;

  int size() const { return static_cast<int>(inputs.size()); }
  int scored_steps() const { return last_step_only ? 1 : steps; }
  // Index of the time step producing scored output j.
  int scored_step_index(int j) const { return last_step_only ? steps - 1 : j; }
};

// Throws ShapeError if the batch is internally inconsistent.
void CheckBatch(const TaskBatch& batch);

// Channel 0 ~ Uniform(0, 1); channel 1 is zero except one 1.0 in the first
// half (steps 0 .. T/2 - 1) and one in the second half. The target is the sum
// of the two marked channel-0 values, scored at the last step.
TaskBatch GenerateAddition(const TaskSpec& spec, Rng& rng);

// L random symbols, D - 1 blanks, a go marker, L blanks. The target is blank
// for the first L + D steps, then the payload.
TaskBatch GenerateCopy(const TaskSpec& spec, Rng& rng);

// Per sequence: a mixture of `components` sinusoids with random amplitude,
// frequency and phase, shifted to zero mean and scaled to max |value| = 1.
// The input is a single start token at step 0.
TaskBatch GenerateWaveform(const TaskSpec& spec, Rng& rng);

// Dispatches on spec.kind.
TaskBatch GenerateBatch(const TaskSpec& spec, Rng& rng);

// Dispatches with a generator seeded from spec.seed.
TaskBatch GenerateBatch(const TaskSpec& spec);

// Cross-entropy of a predictor that always says "blank" outside the payload
// and guesses uniformly over the K symbols on it: L ln K / (2L + D).
double CopyBaselineCrossEntropy(const TaskSpec& spec);

}  // namespace ornn

#endif  // ORNN_TASKS_H_
