// Copyright 2026 The gradsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gradsim/task_factory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace gradsim {
namespace {

struct TextBin {
  std::int64_t min_size;  // inclusive lower bound on |D|
  HourRange hours;
};

constexpr std::array<TextBin, 4> kTextBins = {{
    {10'000, {3.0, 6.0}},
    {25'000, {4.0, 8.0}},
    {50'000, {5.0, 9.0}},
    {100'000, {7.0, 10.0}},
}};

constexpr HourRange kImageHours = {1.0, 2.0};

// floor(size * fraction), robust to products landing a few ulps under an
// integer (e.g. 0.1 * 30).
std::int64_t FloorFraction(std::int64_t size, double fraction) {
  return static_cast<std::int64_t>(
      std::floor(static_cast<double>(size) * fraction + 1e-9));
}

}  // namespace

TaskType SampleTaskType(Rng& rng, const ProtocolParams& params) {
  const double u = rng.Uniform01();
  double cumulative = 0.0;
  TaskType last_positive = TaskType::kImage;
  for (TaskType t : kAllTaskTypes) {
    const double w = CategoryWeight(params, t);
    if (w <= 0.0) continue;
    last_positive = t;
    cumulative += w;
    if (u < cumulative) return t;
  }
  // Rounding can leave the cumulative sum a hair under 1.
  return last_positive;
}

PartitionPlan PlanPartition(std::int64_t dataset_size,
                            const ProtocolParams& params) {
  if (dataset_size < kMinDatasetSize) {
    throw ProtocolError("dataset_size: " + std::to_string(dataset_size) +
                        " is below the minimum of " +
                        std::to_string(kMinDatasetSize));
  }
  PartitionPlan plan;
  plan.n_test =
      std::min(FloorFraction(dataset_size, params.rho_test), params.kappa_test);
  plan.n_synth = std::min(FloorFraction(dataset_size, params.rho_synth),
                          params.kappa_synth);
  plan.n_train = dataset_size - plan.n_test;
  if (plan.n_test < 1 || plan.n_synth < 1 || plan.n_train < 1) {
    throw ProtocolError("dataset_size: " + std::to_string(dataset_size) +
                        " yields an empty partition");
  }
  return plan;
}

HourRange TimeBin(TaskType type, std::int64_t dataset_size) {
  if (IsImageTask(type)) return kImageHours;
  HourRange hours = kTextBins.front().hours;
  for (const TextBin& bin : kTextBins) {
    if (dataset_size >= bin.min_size) hours = bin.hours;
  }
  return hours;
}

double AllocateTime(TaskType type, std::int64_t dataset_size, Rng& rng) {
  if (dataset_size <= 0) {
    throw ProtocolError("dataset_size: must be positive");
  }
  const HourRange bin = TimeBin(type, dataset_size);
  return rng.Uniform(bin.lo, bin.hi);
}

TaskSpec CreateTask(TaskId id, double model_size_b, std::int64_t dataset_size,
                    SimTime created_at, Rng& rng,
                    const ProtocolParams& params) {
  if (!(std::isfinite(model_size_b) && model_size_b > 0.0)) {
    throw ProtocolError("model_size_b: must be positive");
  }
  // Validates dataset_size before any draw.
  const PartitionPlan partition = PlanPartition(dataset_size, params);

  TaskSpec task;
  task.id = id;
  task.task_type = SampleTaskType(rng, params);
  task.model_size_b = model_size_b;
  task.dataset_size = dataset_size;
  task.partition = partition;
  task.hours_allocated = AllocateTime(task.task_type, dataset_size, rng);
  task.attempts = 0;
  task.created_at = created_at;
  task.state = TaskState::kPending;
  return task;
}

}  // namespace gradsim
