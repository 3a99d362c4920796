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

#include "gradsim/protocol.hpp"

#include <gtest/gtest.h>

namespace gradsim {
namespace {

std::string ViolationOf(const ProtocolParams& p) {
  try {
    ValidateParams(p);
  } catch (const ProtocolError& e) {
    return e.what();
  }
  return "";
}

TEST(ValidateParamsTest, AcceptsPublishedDefaults) {
  const ProtocolParams p;
  EXPECT_NO_THROW(ValidateParams(p));
  EXPECT_DOUBLE_EQ(p.rho_instruct, 0.25);
  EXPECT_DOUBLE_EQ(p.rho_dpo, 0.1);
  EXPECT_DOUBLE_EQ(p.rho_grpo, 0.3);
  EXPECT_DOUBLE_EQ(p.rho_image, 0.35);
  EXPECT_DOUBLE_EQ(p.alpha_default_score, 2.0);
  EXPECT_DOUBLE_EQ(p.gamma_min_score, 0.01);
  EXPECT_DOUBLE_EQ(p.lambda_top_multiplier, 3.0);
  EXPECT_DOUBLE_EQ(p.rho_test, 0.1);
  EXPECT_DOUBLE_EQ(p.rho_synth, 1.0);
  EXPECT_EQ(p.kappa_test, 1000);
  EXPECT_EQ(p.kappa_synth, 300);
  EXPECT_DOUBLE_EQ(p.omega_test_weight, 0.7);
  EXPECT_DOUBLE_EQ(p.delta_image_weight, 0.25);
  EXPECT_DOUBLE_EQ(p.alpha_suspicion, 0.5);
  EXPECT_DOUBLE_EQ(p.s_first, 3.0);
  EXPECT_DOUBLE_EQ(p.s_penalty, -1.0);
  EXPECT_DOUBLE_EQ(p.rho_penalty, 0.25);
  EXPECT_DOUBLE_EQ(p.window_weights[0].weight, 0.3);
  EXPECT_DOUBLE_EQ(p.window_weights[1].weight, 0.3);
  EXPECT_DOUBLE_EQ(p.window_weights[2].weight, 0.4);
  EXPECT_DOUBLE_EQ(p.beta_sigmoid, 0.7);
  EXPECT_DOUBLE_EQ(p.omega_linear, 0.05);
  EXPECT_DOUBLE_EQ(p.gamma_steepness, 9.0);
  EXPECT_DOUBLE_EQ(p.mu_shift, 0.5);
  EXPECT_DOUBLE_EQ(p.nu_power, 0.75);
  EXPECT_EQ(p.text_pool_min, 8);
  EXPECT_EQ(p.text_pool_max, 15);
  EXPECT_EQ(p.image_pool_min, 15);
  EXPECT_EQ(p.image_pool_max, 25);
}

TEST(ValidateParamsTest, RejectsCategoryWeightSum) {
  ProtocolParams p;
  p.rho_instruct = 0.5;
  EXPECT_EQ(ViolationOf(p).rfind("category weights", 0), 0u) << ViolationOf(p);
}

TEST(ValidateParamsTest, RejectsZeroKappaTest) {
  ProtocolParams p;
  p.kappa_test = 0;
  EXPECT_EQ(ViolationOf(p).rfind("kappa_test", 0), 0u);
}

TEST(ValidateParamsTest, RejectsOutOfUnitFractions) {
  ProtocolParams p;
  p.omega_test_weight = 1.5;
  EXPECT_EQ(ViolationOf(p).rfind("omega_test_weight", 0), 0u);
  p = {};
  p.beta_sigmoid = -0.1;
  EXPECT_EQ(ViolationOf(p).rfind("beta_sigmoid", 0), 0u);
  p = {};
  p.vtrust = 2.0;
  EXPECT_EQ(ViolationOf(p).rfind("vtrust", 0), 0u);
}

TEST(ValidateParamsTest, RejectsEmptyPoolRange) {
  ProtocolParams p;
  p.text_pool_min = 16;
  EXPECT_EQ(ViolationOf(p).rfind("text_pool", 0), 0u);
  p = {};
  p.image_pool_min = 0;
  EXPECT_EQ(ViolationOf(p).rfind("image_pool", 0), 0u);
}

TEST(ValidateParamsTest, RejectsWindowWeightSum) {
  ProtocolParams p;
  p.window_weights[2].weight = 0.5;
  EXPECT_EQ(ViolationOf(p).rfind("window_weights", 0), 0u);
}

TEST(TaskTypeTest, NamesRoundTrip) {
  for (TaskType t : kAllTaskTypes) {
    EXPECT_EQ(ParseTaskType(ToString(t)), t);
  }
  EXPECT_FALSE(ParseTaskType("Video").has_value());
}

TEST(StrategyTest, ValidatesRatesAndMargins) {
  EXPECT_NO_THROW(ValidateStrategy({StrategyKind::kUnreliable, 0.5, 0.0}));
  EXPECT_THROW(ValidateStrategy({StrategyKind::kUnreliable, 1.5, 0.0}),
               ProtocolError);
  EXPECT_THROW(ValidateStrategy({StrategyKind::kOverfitter, 0.0, 0.0}),
               ProtocolError);
  EXPECT_EQ(ParseStrategyKind("Exploiter"), StrategyKind::kExploiter);
}

TEST(RecordAssignmentTest, TracksReliabilityAndRunningMean) {
  MinerProfile m;
  EXPECT_DOUBLE_EQ(m.reliability, 1.0);
  RecordAssignment(m, true, 3.0);
  RecordAssignment(m, false, 0.0);
  RecordAssignment(m, true, -1.0);  // clipped to 0
  EXPECT_EQ(m.assigned, 3u);
  EXPECT_EQ(m.completed, 2u);
  EXPECT_DOUBLE_EQ(m.reliability, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.quality_score, 1.0);
}

TEST(ScoreLedgerTest, RejectsBackwardsTimeAndRepeatedPairs) {
  ScoreLedger ledger;
  ledger.Append({1, 10, 3.0, 5.0});
  ledger.Append({2, 10, 0.0, 5.0});
  EXPECT_THROW(ledger.Append({3, 11, 0.0, 4.0}), ProtocolError);
  EXPECT_THROW(ledger.Append({1, 10, 1.0, 6.0}), ProtocolError);
  ledger.Append({1, 11, 1.0, 6.0});
  EXPECT_EQ(ledger.size(), 3u);
}

TEST(LossComponentsTest, OrdersByModality) {
  EXPECT_EQ(LossComponents(TextLosses{1.0, 2.0}), std::make_pair(1.0, 2.0));
  EXPECT_EQ(LossComponents(ImageLosses{3.0, 4.0}), std::make_pair(3.0, 4.0));
}

}  // namespace
}  // namespace gradsim
