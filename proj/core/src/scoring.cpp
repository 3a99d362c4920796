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

#include "gradsim/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace gradsim {

double TaskScore(int rank, int n_valid, const ProtocolParams& params) {
  if (n_valid < 1 || rank < 1 || rank > n_valid) {
    throw ProtocolError("task_score: rank " + std::to_string(rank) +
                        " outside [1, " + std::to_string(n_valid) + "]");
  }
  if (rank == 1) return params.s_first;
  const double threshold =
      static_cast<double>(n_valid) * (1.0 - params.rho_penalty);
  if (static_cast<double>(rank) > threshold) return params.s_penalty;
  return 0.0;
}

double TaskWeight(double model_size_b, double hours) {
  if (!(model_size_b > 0.0) || !(hours > 0.0)) {
    throw ProtocolError("task_weight: model size and hours must be positive");
  }
  return std::max(1.0, 2.0 * std::sqrt(model_size_b * hours));
}

std::vector<double> WindowSums(const ScoreLedger& ledger, SimTime now,
                               std::span<const MinerId> miners, double days) {
  std::unordered_map<MinerId, std::size_t> index;
  for (std::size_t i = 0; i < miners.size(); ++i) index.emplace(miners[i], i);

  const SimTime start = now - days * kHoursPerDay;
  std::vector<double> sums(miners.size(), 0.0);
  for (const LedgerEntry& e : ledger.entries()) {
    if (e.timestamp <= start || e.timestamp > now) continue;
    auto it = index.find(e.miner_id);
    if (it != index.end()) sums[it->second] += e.adjusted_score;
  }
  return sums;
}

std::vector<double> MaxAbsNormalise(std::span<const double> values) {
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  std::vector<double> out(values.size(), 0.0);
  if (max_abs == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / max_abs;
  return out;
}

std::vector<double> TemporalAggregate(const ScoreLedger& ledger, SimTime now,
                                      std::span<const MinerId> miners,
                                      const ProtocolParams& params) {
  std::vector<double> total(miners.size(), 0.0);
  for (const WindowWeight& window : params.window_weights) {
    const std::vector<double> normalised =
        MaxAbsNormalise(WindowSums(ledger, now, miners, window.days));
    for (std::size_t i = 0; i < miners.size(); ++i) {
      total[i] += window.weight * normalised[i];
    }
  }
  return total;
}

std::vector<double> NormaliseQuality(std::span<const double> s_temporal) {
  std::vector<double> x(s_temporal.size(), 0.0);
  if (s_temporal.empty()) return x;
  const double max_score =
      *std::max_element(s_temporal.begin(), s_temporal.end());
  if (!(max_score > 0.0)) return x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(s_temporal[i] / max_score, 0.0, 1.0);
  }
  return x;
}

double SigmoidScore(double x, const ProtocolParams& params) {
  const double logistic =
      1.0 / (1.0 + std::exp(-params.gamma_steepness * (x - params.mu_shift)));
  return std::pow(logistic, params.nu_power);
}

double FinalScore(double x, const ProtocolParams& params) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ProtocolError("final_score: x must lie in [0, 1], got " +
                        std::to_string(x));
  }
  return params.beta_sigmoid * SigmoidScore(x, params) +
         params.omega_linear * x;
}

std::vector<double> ChainWeights(std::span<const double> final_scores,
                                 const ProtocolParams& params) {
  std::vector<double> weights(final_scores.size());
  for (std::size_t i = 0; i < final_scores.size(); ++i) {
    weights[i] = final_scores[i] * params.vtrust;
  }
  return weights;
}

FinalScoreReport ComputeFinalScores(const ScoreLedger& ledger, SimTime now,
                                    std::span<const MinerId> miners,
                                    const ProtocolParams& params) {
  const std::vector<double> temporal =
      TemporalAggregate(ledger, now, miners, params);
  const std::vector<double> x = NormaliseQuality(temporal);

  std::vector<double> finals(miners.size());
  for (std::size_t i = 0; i < miners.size(); ++i) {
    finals[i] = FinalScore(x[i], params);
  }
  const std::vector<double> chain = ChainWeights(finals, params);

  FinalScoreReport report;
  report.computed_at = now;
  report.rows.reserve(miners.size());
  for (std::size_t i = 0; i < miners.size(); ++i) {
    report.rows.push_back({miners[i], temporal[i], x[i], finals[i], chain[i]});
  }
  return report;
}

}  // namespace gradsim
