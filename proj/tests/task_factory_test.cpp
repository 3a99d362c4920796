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

#include <array>

#include <gtest/gtest.h>

namespace gradsim {
namespace {

TEST(SampleTaskTypeTest, DegenerateDistributionAlwaysImage) {
  ProtocolParams p;
  p.rho_instruct = p.rho_dpo = p.rho_grpo = 0.0;
  p.rho_image = 1.0;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(SampleTaskType(rng, p), TaskType::kImage);
  }
}

TEST(SampleTaskTypeTest, FrequenciesMatchWeights) {
  const ProtocolParams p;
  Rng rng(2024);
  constexpr int kDraws = 100'000;
  std::array<int, 4> counts{};
  for (int i = 0; i < kDraws; ++i) {
    ++counts[static_cast<std::size_t>(SampleTaskType(rng, p))];
  }
  const std::array<double, 4> expected = {0.25, 0.10, 0.30, 0.35};
  double chi2 = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double freq = static_cast<double>(counts[k]) / kDraws;
    EXPECT_NEAR(freq, expected[k], 0.01);
    const double e = expected[k] * kDraws;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // Chi-square 99.9% critical value, 3 degrees of freedom.
  EXPECT_LT(chi2, 16.266);
}

TEST(SampleTaskTypeTest, FixedSeedIsReproducible) {
  const ProtocolParams p;
  Rng a(42), b(42);
  for (int i = 0; i < 500; ++i) {
    ASSERT_EQ(SampleTaskType(a, p), SampleTaskType(b, p));
  }
}

TEST(PlanPartitionTest, PublishedParameterArithmetic) {
  const ProtocolParams p;
  EXPECT_EQ(PlanPartition(50'000, p), (PartitionPlan{49'000, 1000, 300}));
  EXPECT_EQ(PlanPartition(5'000, p), (PartitionPlan{4'500, 500, 300}));
  const PartitionPlan big = PlanPartition(10'000'000, p);
  EXPECT_EQ(big.n_test, 1000);
  EXPECT_EQ(big.n_synth, 300);
  EXPECT_EQ(big.n_train, 10'000'000 - 1000);
}

TEST(PlanPartitionTest, SmallestAcceptedSize) {
  const ProtocolParams p;
  EXPECT_EQ(PlanPartition(20, p), (PartitionPlan{18, 2, 20}));
  EXPECT_THROW(PlanPartition(19, p), ProtocolError);
  EXPECT_THROW(PlanPartition(10, p), ProtocolError);
  EXPECT_THROW(PlanPartition(0, p), ProtocolError);
}

TEST(PlanPartitionTest, SplitInvariantsForAllSizes) {
  const ProtocolParams p;
  for (std::int64_t d = 20; d < 30'000; d += 7) {
    const PartitionPlan plan = PlanPartition(d, p);
    ASSERT_LE(plan.n_test, p.kappa_test);
    ASSERT_LE(plan.n_synth, p.kappa_synth);
    ASSERT_EQ(plan.n_train + plan.n_test, d);
    ASSERT_GT(plan.n_test, 0);
    ASSERT_GT(plan.n_synth, 0);
    ASSERT_GT(plan.n_train, 0);
  }
}

TEST(TimeBinTest, HalfOpenBinsAndClamping) {
  auto bin = [](TaskType t, std::int64_t d) {
    const HourRange r = TimeBin(t, d);
    return std::make_pair(r.lo, r.hi);
  };
  using P = std::pair<double, double>;
  EXPECT_EQ(bin(TaskType::kInstruct, 5'000), P(3, 6));
  EXPECT_EQ(bin(TaskType::kInstruct, 10'000), P(3, 6));
  EXPECT_EQ(bin(TaskType::kInstruct, 24'999), P(3, 6));
  EXPECT_EQ(bin(TaskType::kInstruct, 25'000), P(4, 8));
  EXPECT_EQ(bin(TaskType::kDpo, 30'000), P(4, 8));
  EXPECT_EQ(bin(TaskType::kGrpo, 50'000), P(5, 9));
  EXPECT_EQ(bin(TaskType::kGrpo, 100'000), P(7, 10));
  EXPECT_EQ(bin(TaskType::kInstruct, 500'000), P(7, 10));
  EXPECT_EQ(bin(TaskType::kInstruct, 9'000'000), P(7, 10));
  EXPECT_EQ(bin(TaskType::kImage, 500), P(1, 2));
  EXPECT_EQ(bin(TaskType::kImage, 300'000), P(1, 2));
}

TEST(AllocateTimeTest, DrawsStayInsideTheirBin) {
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const double h = AllocateTime(TaskType::kInstruct, 30'000, rng);
    ASSERT_GE(h, 4.0);
    ASSERT_LE(h, 8.0);
    const double g = AllocateTime(TaskType::kImage, 500, rng);
    ASSERT_GE(g, 1.0);
    ASSERT_LE(g, 2.0);
    const double c = AllocateTime(TaskType::kInstruct, 5'000, rng);
    ASSERT_GE(c, 3.0);
    ASSERT_LE(c, 6.0);
  }
  EXPECT_THROW(AllocateTime(TaskType::kInstruct, 0, rng), ProtocolError);
}

TEST(CreateTaskTest, WellFormedPendingTask) {
  const ProtocolParams p;
  Rng rng(7);
  const TaskSpec t = CreateTask(1, 8.0, 50'000, 0.0, rng, p);
  EXPECT_EQ(t.state, TaskState::kPending);
  EXPECT_EQ(t.attempts, 0);
  EXPECT_EQ(t.partition, (PartitionPlan{49'000, 1000, 300}));
  const HourRange bin = TimeBin(t.task_type, 50'000);
  EXPECT_GE(t.hours_allocated, bin.lo);
  EXPECT_LE(t.hours_allocated, bin.hi);
  EXPECT_GT(t.model_size_b, 0.0);
}

TEST(CreateTaskTest, RejectsTinyDatasetWithoutConsumingRandomness) {
  const ProtocolParams p;
  Rng rng(7), fresh(7);
  EXPECT_THROW(CreateTask(1, 8.0, 10, 0.0, rng, p), ProtocolError);
  EXPECT_THROW(CreateTask(1, 0.0, 50'000, 0.0, rng, p), ProtocolError);
  EXPECT_EQ(rng.NextU64(), fresh.NextU64());
}

TEST(CreateTaskTest, SameSeedSameTaskExceptId) {
  const ProtocolParams p;
  Rng a(7), b(7);
  TaskSpec x = CreateTask(1, 8.0, 50'000, 3.0, a, p);
  TaskSpec y = CreateTask(2, 8.0, 50'000, 3.0, b, p);
  EXPECT_NE(x.id, y.id);
  y.id = x.id;
  EXPECT_EQ(x, y);
}

}  // namespace
}  // namespace gradsim
