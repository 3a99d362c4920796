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

#ifndef GRADSIM_TASK_FACTORY_HPP_
#define GRADSIM_TASK_FACTORY_HPP_

#include <cstdint>

#include "gradsim/protocol.hpp"
#include "gradsim/rng.hpp"

namespace gradsim {

// Smallest dataset a task may be created for.
inline constexpr std::int64_t kMinDatasetSize = 20;

struct HourRange {
  double lo;
  double hi;
};

// Draws a category with probability equal to its rho weight.
TaskType SampleTaskType(Rng& rng, const ProtocolParams& params);

// Test split is min(floor(|D| rho_test), kappa_test), carved from D; the
// synthetic set is generated, so it is capped the same way but not
// subtracted. Throws ProtocolError for datasets too small to split.
PartitionPlan PlanPartition(std::int64_t dataset_size,
                            const ProtocolParams& params);

// Closed interval of hours a task may be allocated. Text bins are half-open
// on dataset size ([10k,25k) -> [3,6] ...); sizes outside the table clamp to
// the nearest bin. Image tasks always get [1,2].
HourRange TimeBin(TaskType type, std::int64_t dataset_size);

// Uniform draw from TimeBin(type, dataset_size).
double AllocateTime(TaskType type, std::int64_t dataset_size, Rng& rng);

// Builds a Pending task. Inputs are validated before any randomness is
// consumed, so a rejected task leaves `rng` untouched.
TaskSpec CreateTask(TaskId id, double model_size_b, std::int64_t dataset_size,
                    SimTime created_at, Rng& rng,
                    const ProtocolParams& params);

}  // namespace gradsim

#endif  // GRADSIM_TASK_FACTORY_HPP_
