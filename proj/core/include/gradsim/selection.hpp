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

#ifndef GRADSIM_SELECTION_HPP_
#define GRADSIM_SELECTION_HPP_

#include <span>
#include <vector>

#include "gradsim/protocol.hpp"
#include "gradsim/rng.hpp"

namespace gradsim {

struct SelectionEntry {
  MinerId miner_id = 0;
  double weight = 0.0;
  int rank = 0;  // 1-based
  // Un-normalised relative selection probability.
  double probability = 0.0;
};

// alpha for a miner's first task of the day, max(s_i, gamma) afterwards.
double SelectionWeight(const MinerProfile& miner, const ProtocolParams& params);

// Relative probability of the rank-th of pool_size miners:
// lambda - (rank - 1) * (lambda - 1) / pool_size.
double RankProbability(int rank, std::size_t pool_size,
                       const ProtocolParams& params);

// Sorts the pool by weight descending (ties by id ascending) and assigns
// rank probabilities. Throws ProtocolError on an empty pool.
std::vector<SelectionEntry> RankProbabilities(
    std::span<const MinerProfile> pool, const ProtocolParams& params);

// Draws the pool size uniformly from the task type's range, capped at the
// number of available miners, then samples that many miners without
// replacement proportionally to their rank probabilities, renormalising
// after each pick. Returns ids in pick order.
std::vector<MinerId> SelectPool(std::span<const MinerProfile> pool,
                                TaskType task_type, Rng& rng,
                                const ProtocolParams& params);

}  // namespace gradsim

#endif  // GRADSIM_SELECTION_HPP_
