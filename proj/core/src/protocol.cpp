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

#include <algorithm>
#include <cmath>
#include <string>

namespace gradsim {
namespace {

void Require(bool ok, std::string_view field, const std::string& detail) {
  if (!ok) throw ProtocolError(std::string(field) + ": " + detail);
}

void RequireUnit(double value, std::string_view field) {
  Require(std::isfinite(value) && value >= 0.0 && value <= 1.0, field,
          "must lie in [0, 1], got " + std::to_string(value));
}

void RequirePositive(double value, std::string_view field) {
  Require(std::isfinite(value) && value > 0.0, field,
          "must be positive, got " + std::to_string(value));
}

void RequirePool(std::int64_t lo, std::int64_t hi, std::string_view field) {
  Require(lo >= 1 && lo <= hi, field,
          "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
              "] must be non-empty with min >= 1");
}

}  // namespace

std::string_view ToString(TaskType type) {
  switch (type) {
    case TaskType::kInstruct: return "Instruct";
    case TaskType::kDpo: return "DPO";
    case TaskType::kGrpo: return "GRPO";
    case TaskType::kImage: return "Image";
  }
  return "?";
}

std::optional<TaskType> ParseTaskType(std::string_view name) {
  for (TaskType t : kAllTaskTypes) {
    if (ToString(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view ToString(TaskState state) {
  switch (state) {
    case TaskState::kPending: return "Pending";
    case TaskState::kDelayed: return "Delayed";
    case TaskState::kTraining: return "Training";
    case TaskState::kEvaluated: return "Evaluated";
    case TaskState::kDropped: return "Dropped";
  }
  return "?";
}

std::string_view ToString(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kRandomSearch: return "RandomSearch";
    case StrategyKind::kLocalSearch: return "LocalSearch";
    case StrategyKind::kExploiter: return "Exploiter";
    case StrategyKind::kOverfitter: return "Overfitter";
    case StrategyKind::kUnreliable: return "Unreliable";
  }
  return "?";
}

std::optional<StrategyKind> ParseStrategyKind(std::string_view name) {
  for (StrategyKind k :
       {StrategyKind::kRandomSearch, StrategyKind::kLocalSearch,
        StrategyKind::kExploiter, StrategyKind::kOverfitter,
        StrategyKind::kUnreliable}) {
    if (ToString(k) == name) return k;
  }
  return std::nullopt;
}

void ValidateStrategy(const Strategy& strategy) {
  RequireUnit(strategy.failure_rate, "failure_rate");
  if (strategy.kind == StrategyKind::kOverfitter) {
    RequirePositive(strategy.overfit_margin, "overfit_margin");
  }
}

double CategoryWeight(const ProtocolParams& params, TaskType type) {
  switch (type) {
    case TaskType::kInstruct: return params.rho_instruct;
    case TaskType::kDpo: return params.rho_dpo;
    case TaskType::kGrpo: return params.rho_grpo;
    case TaskType::kImage: return params.rho_image;
  }
  return 0.0;
}

ProtocolParams ValidateParams(const ProtocolParams& p) {
  double rho_sum = 0.0;
  for (TaskType t : kAllTaskTypes) {
    const double w = CategoryWeight(p, t);
    Require(std::isfinite(w) && w >= 0.0 && w <= 1.0, "category weights",
            std::string(ToString(t)) + " weight must lie in [0, 1]");
    rho_sum += w;
  }
  Require(std::abs(rho_sum - 1.0) <= 1e-9, "category weights",
          "must sum to 1, got " + std::to_string(rho_sum));

  RequirePositive(p.alpha_default_score, "alpha_default_score");
  RequirePositive(p.gamma_min_score, "gamma_min_score");
  Require(std::isfinite(p.lambda_top_multiplier) &&
              p.lambda_top_multiplier >= 1.0,
          "lambda_top_multiplier", "must be >= 1");

  RequireUnit(p.rho_test, "rho_test");
  RequireUnit(p.rho_synth, "rho_synth");
  Require(p.kappa_test > 0, "kappa_test", "must be positive");
  Require(p.kappa_synth > 0, "kappa_synth", "must be positive");

  RequireUnit(p.omega_test_weight, "omega_test_weight");
  RequireUnit(p.delta_image_weight, "delta_image_weight");

  Require(std::isfinite(p.epsilon_duplicate) && p.epsilon_duplicate >= 0.0,
          "epsilon_duplicate", "must be finite and >= 0");
  Require(std::isfinite(p.alpha_suspicion) && p.alpha_suspicion >= 0.0,
          "alpha_suspicion", "must be finite and >= 0");

  Require(std::isfinite(p.s_first), "s_first", "must be finite");
  Require(std::isfinite(p.s_penalty), "s_penalty", "must be finite");
  RequireUnit(p.rho_penalty, "rho_penalty");

  double window_sum = 0.0;
  for (const WindowWeight& w : p.window_weights) {
    RequirePositive(w.days, "window_weights");
    Require(std::isfinite(w.weight) && w.weight >= 0.0, "window_weights",
            "weights must be finite and >= 0");
    window_sum += w.weight;
  }
  Require(std::abs(window_sum - 1.0) <= 1e-9, "window_weights",
          "must sum to 1, got " + std::to_string(window_sum));

  RequireUnit(p.beta_sigmoid, "beta_sigmoid");
  RequireUnit(p.omega_linear, "omega_linear");
  RequirePositive(p.gamma_steepness, "gamma_steepness");
  Require(std::isfinite(p.mu_shift), "mu_shift", "must be finite");
  RequirePositive(p.nu_power, "nu_power");

  RequirePool(p.text_pool_min, p.text_pool_max, "text_pool");
  RequirePool(p.image_pool_min, p.image_pool_max, "image_pool");

  Require(std::isfinite(p.retry_c) && p.retry_c >= 0.0, "retry_c",
          "must be finite and >= 0");
  RequireUnit(p.vtrust, "vtrust");
  return p;
}

void RecordAssignment(MinerProfile& miner, bool completed,
                      double quality_sample) {
  ++miner.assigned;
  if (completed) ++miner.completed;
  miner.reliability =
      static_cast<double>(miner.completed) / static_cast<double>(miner.assigned);
  const double sample = std::max(quality_sample, 0.0);
  ++miner.quality_samples;
  miner.quality_score +=
      (sample - miner.quality_score) / static_cast<double>(miner.quality_samples);
}

std::pair<double, double> LossComponents(const Losses& losses) {
  if (const auto* text = std::get_if<TextLosses>(&losses)) {
    return {text->test, text->synth};
  }
  const auto& image = std::get<ImageLosses>(losses);
  return {image.text_guided, image.no_text};
}

void ScoreLedger::Append(const LedgerEntry& entry) {
  if (!entries_.empty() && entry.timestamp < entries_.back().timestamp) {
    throw ProtocolError("score ledger: timestamps must be non-decreasing");
  }
  if (!seen_.emplace(entry.miner_id, entry.task_id).second) {
    throw ProtocolError("score ledger: duplicate (miner " +
                        std::to_string(entry.miner_id) + ", task " +
                        std::to_string(entry.task_id) + ") entry");
  }
  entries_.push_back(entry);
}

}  // namespace gradsim
