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

#ifndef GRADSIM_STRATEGY_HPP_
#define GRADSIM_STRATEGY_HPP_

#include <optional>
#include <string_view>

namespace gradsim {

enum class StrategyKind {
  kRandomSearch,  // fresh uniform configuration every task
  kLocalSearch,   // perturbs its own best configuration
  kExploiter,     // copies the best public configuration
  kOverfitter,    // trades synthetic loss for test loss
  kUnreliable,    // local search that fails to submit with probability q
};

std::string_view ToString(StrategyKind kind);
std::optional<StrategyKind> ParseStrategyKind(std::string_view name);

struct Strategy {
  StrategyKind kind = StrategyKind::kRandomSearch;
  // Probability of failing to submit for an assigned task.
  double failure_rate = 0.0;
  // Loss units moved from test to synthetic loss; Overfitter only.
  double overfit_margin = 0.0;
};

// Throws ProtocolError when failure_rate is outside [0,1] or an Overfitter
// has a non-positive margin.
void ValidateStrategy(const Strategy& strategy);

}  // namespace gradsim

#endif  // GRADSIM_STRATEGY_HPP_
