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

namespace gradsim {

double SelectionWeight(const MinerProfile& miner,
                       const ProtocolParams& params) {
  if (!miner.participated_today) return params.alpha_default_score;
  return std::max(miner.quality_score, params.gamma_min_score);
}

double RankProbability(int rank, std::size_t pool_size,
                       const ProtocolParams& params) {
  const double lambda = params.lambda_top_multiplier;
  return lambda - static_cast<double>(rank - 1) * (lambda - 1.0) /
                      static_cast<double>(pool_size);
}

std::vector<SelectionEntry> RankProbabilities(
    std::span<const MinerProfile> pool, const ProtocolParams& params) {
  if (pool.empty()) throw ProtocolError("pool: no miners available");

  std::vector<SelectionEntry> entries;
  entries.reserve(pool.size());
  for (const MinerProfile& miner : pool) {
    entries.push_back({miner.id, SelectionWeight(miner, params), 0, 0.0});
  }
  std::sort(entries.begin(), entries.end(),
            [](const SelectionEntry& a, const SelectionEntry& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.miner_id < b.miner_id;
            });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<int>(i) + 1;
    entries[i].probability =
        RankProbability(entries[i].rank, entries.size(), params);
  }
  return entries;
}

std::vector<MinerId> SelectPool(std::span<const MinerProfile> pool,
                                TaskType task_type, Rng& rng,
                                const ProtocolParams& params) {
  std::vector<SelectionEntry> remaining = RankProbabilities(pool, params);

  const bool image = IsImageTask(task_type);
  const std::int64_t lo = image ? params.image_pool_min : params.text_pool_min;
  const std::int64_t hi = image ? params.image_pool_max : params.text_pool_max;
  const std::size_t target = static_cast<std::size_t>(
      std::min<std::int64_t>(rng.UniformInt(lo, hi),
                             static_cast<std::int64_t>(remaining.size())));

  std::vector<MinerId> picked;
  picked.reserve(target);
  while (picked.size() < target) {
    double total = 0.0;
    for (const SelectionEntry& e : remaining) total += e.probability;
    const double u = rng.Uniform01() * total;
    std::size_t chosen = remaining.size() - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      cumulative += remaining[i].probability;
      if (u < cumulative) {
        chosen = i;
        break;
      }
    }
    picked.push_back(remaining[chosen].miner_id);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return picked;
}

}  // namespace gradsim
