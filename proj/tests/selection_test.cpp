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

#include "gradsim/selection.hpp"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

namespace gradsim {
namespace {

// Miners 0..n-1 that have all participated, with quality decreasing in id,
// so rank i+1 is miner i.
std::vector<MinerProfile> RankedPool(int n) {
  std::vector<MinerProfile> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pool[i].id = static_cast<MinerId>(i);
    pool[i].participated_today = true;
    pool[i].quality_score = 1.0 + (n - i);
  }
  return pool;
}

TEST(SelectionWeightTest, DefaultMinimumAndIdentity) {
  const ProtocolParams p;
  MinerProfile m;
  m.participated_today = false;
  m.quality_score = 0.5;
  EXPECT_DOUBLE_EQ(SelectionWeight(m, p), 2.0);
  m.participated_today = true;
  m.quality_score = 0.0;
  EXPECT_DOUBLE_EQ(SelectionWeight(m, p), 0.01);
  m.quality_score = 1.7;
  EXPECT_DOUBLE_EQ(SelectionWeight(m, p), 1.7);
}

TEST(RankProbabilitiesTest, TenMinersLinearRamp) {
  const ProtocolParams p;
  const auto entries = RankProbabilities(RankedPool(10), p);
  const std::vector<double> expected = {3.0, 2.8, 2.6, 2.4, 2.2,
                                        2.0, 1.8, 1.6, 1.4, 1.2};
  ASSERT_EQ(entries.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(entries[i].rank, static_cast<int>(i) + 1);
    EXPECT_EQ(entries[i].miner_id, i);
    EXPECT_NEAR(entries[i].probability, expected[i], 1e-12);
  }
  EXPECT_EQ(entries.front().probability, 3.0);
  EXPECT_DOUBLE_EQ(entries.front().probability / entries.back().probability,
                   2.5);
}

TEST(RankProbabilitiesTest, OneAndTwoMiners) {
  const ProtocolParams p;
  const auto one = RankProbabilities(RankedPool(1), p);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].probability, 3.0);
  const auto two = RankProbabilities(RankedPool(2), p);
  EXPECT_EQ(two[0].probability, 3.0);
  EXPECT_EQ(two[1].probability, 2.0);
}

TEST(RankProbabilitiesTest, EmptyPoolThrows) {
  EXPECT_THROW(RankProbabilities({}, ProtocolParams{}), ProtocolError);
}

TEST(RankProbabilitiesTest, TiesBreakByMinerId) {
  const ProtocolParams p;
  std::vector<MinerProfile> pool(4);
  const MinerId ids[] = {7, 3, 9, 1};
  for (std::size_t i = 0; i < 4; ++i) pool[i].id = ids[i];  // all weight 2.0
  const auto entries = RankProbabilities(pool, p);
  EXPECT_EQ(entries[0].miner_id, 1u);
  EXPECT_EQ(entries[1].miner_id, 3u);
  EXPECT_EQ(entries[2].miner_id, 7u);
  EXPECT_EQ(entries[3].miner_id, 9u);
}

TEST(RankProbabilitiesTest, EndpointsAreExact) {
  const ProtocolParams p;
  for (int n = 1; n <= 64; ++n) {
    const auto entries = RankProbabilities(RankedPool(n), p);
    EXPECT_EQ(entries.front().probability, 3.0);
    EXPECT_DOUBLE_EQ(entries.back().probability, 1.0 + 2.0 / n);
    for (std::size_t i = 1; i < entries.size(); ++i) {
      ASSERT_LE(entries[i].probability, entries[i - 1].probability);
      ASSERT_GT(entries[i].probability, 0.0);
    }
  }
}

TEST(SelectPoolTest, TextPoolSizeWithinRange) {
  const ProtocolParams p;
  const auto miners = RankedPool(100);
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto picked = SelectPool(miners, TaskType::kInstruct, rng, p);
    ASSERT_GE(picked.size(), 8u);
    ASSERT_LE(picked.size(), 15u);
    ASSERT_EQ(std::set<MinerId>(picked.begin(), picked.end()).size(),
              picked.size());
  }
}

TEST(SelectPoolTest, SmallPoolSelectsEveryone) {
  const ProtocolParams p;
  Rng rng(5);
  auto picked = SelectPool(RankedPool(5), TaskType::kImage, rng, p);
  std::sort(picked.begin(), picked.end());
  EXPECT_EQ(picked, (std::vector<MinerId>{0, 1, 2, 3, 4}));
}

TEST(SelectPoolTest, ReproducibleForSameSeed) {
  const ProtocolParams p;
  const auto miners = RankedPool(40);
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) {
    ASSERT_EQ(SelectPool(miners, TaskType::kGrpo, a, p),
              SelectPool(miners, TaskType::kGrpo, b, p));
  }
}

TEST(SelectPoolTest, FirstPickFollowsRankProbabilities) {
  const ProtocolParams p;
  const auto miners = RankedPool(10);
  Rng rng(31337);
  constexpr int kTrials = 200'000;
  std::vector<int> first(10, 0), included(10, 0);
  for (int t = 0; t < kTrials; ++t) {
    const auto picked = SelectPool(miners, TaskType::kInstruct, rng, p);
    ++first[picked.front()];
    for (MinerId m : picked) ++included[m];
  }
  // Brute-force oracle: normalised linear ramp 3.0 .. 1.2, total 21.
  for (int i = 0; i < 10; ++i) {
    const double expected = (3.0 - 0.2 * i) / 21.0;
    const double observed = static_cast<double>(first[i]) / kTrials;
    EXPECT_NEAR(observed / expected, 1.0, 0.05) << "rank " << i + 1;
  }
  const double ratio = static_cast<double>(first[0]) / first[9];
  EXPECT_NEAR(ratio / 2.5, 1.0, 0.05);
  EXPECT_GT(included[0], included[9]);
}

}  // namespace
}  // namespace gradsim
