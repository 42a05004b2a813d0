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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ornn/commands.h"
#include "ornn/config.h"
#include "ornn/error.h"
#include "ornn/serialization.h"
#include "test_util.h"

namespace ornn {
namespace {

TEST(ConfigTest, ParsesKeyValueLines) {
  std::istringstream in("# comment\n task = copy \n\nn=8  # trailing\nlr=0.5\n");
  const ConfigMap map = ParseConfig(in);
  EXPECT_EQ(map.size(), 3u);
  EXPECT_EQ(map.at("task"), "copy");
  EXPECT_EQ(map.at("n"), "8");
  EXPECT_EQ(map.at("lr"), "0.5");
  std::istringstream missing("n 8\n");
  EXPECT_THROW(ParseConfig(missing), FormatError);
  std::istringstream empty_key("=3\n");
  EXPECT_THROW(ParseConfig(empty_key), FormatError);
}

TEST(ConfigTest, AppliesAndValidates) {
  TrainConfig c;
  ApplyConfig({{"task", "waveform"}, {"n", "12"}, {"m", "12"},
               {"storage", "recompute"}, {"activation", "modrelu"},
               {"components", "3"}, {"seed", "9"}},
              c);
  EXPECT_EQ(c.task.kind, TaskKind::kWaveform);
  EXPECT_EQ(c.n, 12);
  EXPECT_EQ(c.m, 12);
  EXPECT_EQ(c.storage, StorageMode::kRecomputeTapes);
  EXPECT_EQ(c.activation, Activation::kModReluReal);
  EXPECT_EQ(c.task.components, 3);
  EXPECT_EQ(c.seed, 9u);
  const TrainConfig r = ResolveTrainConfig(c);
  EXPECT_EQ(r.adam.learning_rate, 1e-3);
  EXPECT_EQ(r.task.length, 800);
  EXPECT_NO_THROW(ValidateTrainConfig(c));

  EXPECT_THROW(ApplyConfig({{"colour", "red"}}, c), FormatError);
  EXPECT_THROW(ApplyConfig({{"lr", "0"}}, c), FormatError);
  EXPECT_THROW(ApplyConfig({{"n", "abc"}}, c), FormatError);
  TrainConfig bad;
  bad.n = 4;
  bad.m = 5;
  EXPECT_THROW(ValidateTrainConfig(bad), FormatError);
  EXPECT_EQ(MetricName(TaskKind::kCopy), "cross-entropy");
}

TrainConfig SmallAddition() {
  TrainConfig c;
  c.n = 8;
  c.m = 4;
  c.task.length = 10;
  c.task.batch = 4;
  c.epochs = 12;
  c.eval_every = 5;
  c.eval_batch = 20;
  return c;
}

TEST(TrainTest, MetricsStreamIsDeterministic) {
  const TrainConfig c = SmallAddition();
  std::ostringstream a, b;
  const TrainResult ra = Train(c, &a);
  Train(c, &b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(ra.iterations, 12);
  EXPECT_EQ(ra.metric_name, "mse");

  std::istringstream lines(a.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kMetricsHeader);
  int rows = 0, evals = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    ASSERT_EQ(cells.size(), 6u) << line;
    EXPECT_EQ(std::stoi(cells[0]), rows);
    if (!cells[3].empty()) ++evals;
    EXPECT_TRUE(cells[4].empty());
  }
  EXPECT_EQ(rows, 12);
  EXPECT_EQ(evals, 3);  // iterations 5, 10 and 12

  TrainConfig other = c;
  other.seed = 2;
  std::ostringstream d;
  Train(other, &d);
  EXPECT_NE(a.str(), d.str());
}

TEST(TrainTest, StorageModesGiveIdenticalTrajectories) {
  TrainConfig c = SmallAddition();
  std::ostringstream a, b;
  const TrainResult ra = Train(c, &a);
  c.storage = StorageMode::kRecomputeTapes;
  const TrainResult rb = Train(c, &b);
  EXPECT_EQ(ra.final_train_loss, rb.final_train_loss);
  EXPECT_EQ(ra.best_params.u, rb.best_params.u);
  EXPECT_GT(rb.flops, ra.flops);
}

TEST(TrainTest, TargetStopsEarlyAndBestIsTracked) {
  TrainConfig c = SmallAddition();
  c.target_metric = 10.0;
  const TrainResult r = Train(c);
  EXPECT_TRUE(r.reached_target);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_EQ(r.best_iteration, 5);
  EXPECT_LT(r.best_metric, 10.0);
  EXPECT_LT(OrthogonalityError(Materialize(r.best_params.stack())), 1e-12);
}

TEST(TrainTest, CopyAndWaveformRun) {
  TrainConfig copy;
  copy.task.kind = TaskKind::kCopy;
  copy.task.payload = 3;
  copy.task.delay = 4;
  copy.task.batch = 3;
  copy.n = 10;
  copy.m = 10;
  copy.epochs = 3;
  copy.eval_batch = 5;
  const TrainResult rc = Train(copy);
  EXPECT_EQ(rc.metric_name, "cross-entropy");
  EXPECT_GT(rc.final_metric, 0.0);

  TrainConfig wave;
  wave.task.kind = TaskKind::kWaveform;
  wave.task.length = 50;
  wave.n = 6;
  wave.m = 6;
  wave.activation = Activation::kModReluReal;
  wave.epochs = 3;
  const TrainResult rw = Train(wave);
  EXPECT_EQ(rw.metric_name, "nmse");
  EXPECT_GT(rw.final_metric, 0.0);
}

TEST(TrainCommandTest, WritesArtifacts) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "ornn_train_command_test";
  std::filesystem::remove_all(dir);
  const TrainConfig c = SmallAddition();
  const TrainResult r = RunTrainCommand(c, dir.string(), nullptr);
  ASSERT_TRUE(std::filesystem::exists(dir / "metrics.csv"));
  ASSERT_TRUE(std::filesystem::exists(dir / "report.json"));
  const Checkpoint ck = LoadCheckpoint((dir / "checkpoint.ornn").string());
  EXPECT_EQ(ck.params.u, r.best_params.u);
  std::ifstream report(dir / "report.json");
  std::stringstream text;
  text << report.rdbuf();
  EXPECT_NE(text.str().find("\"schema_version\""), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ornn
