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

#ifndef GRADSIM_SCORING_HPP_
#define GRADSIM_SCORING_HPP_

#include <span>
#include <vector>

#include "gradsim/protocol.hpp"

namespace gradsim {

// s_first for rank 1, s_penalty for ranks strictly beyond
// n_valid * (1 - rho_penalty), zero otherwise. Rank 1 wins over the penalty
// rule when n_valid == 1. Throws unless 1 <= rank <= n_valid.
double TaskScore(int rank, int n_valid, const ProtocolParams& params);

// Complexity multiplier max(1, 2 * sqrt(model_size_b * hours)).
double TaskWeight(double model_size_b, double hours);

inline double AdjustedScore(double task_score, double task_weight) {
  return task_score * task_weight;
}

// Per-miner sum of adjusted scores with timestamp in (now - days, now].
// Entries for miners outside `miners` are ignored.
std::vector<double> WindowSums(const ScoreLedger& ledger, SimTime now,
                               std::span<const MinerId> miners, double days);

// Divides by the largest absolute value; all-zero input stays zero.
std::vector<double> MaxAbsNormalise(std::span<const double> values);

// Window-weighted sum of max-abs-normalised window sums, aligned with
// `miners`. Each output lies in [-1, 1].
std::vector<double> TemporalAggregate(const ScoreLedger& ledger, SimTime now,
                                      std::span<const MinerId> miners,
                                      const ProtocolParams& params);

// x_i = s_i / max_j s_j, clamped into [0, 1]; all zero if the max is <= 0.
std::vector<double> NormaliseQuality(std::span<const double> s_temporal);

// (1 / (1 + exp(-gamma (x - mu))))^nu
double SigmoidScore(double x, const ProtocolParams& params);

// beta * SigmoidScore(x) + omega_linear * x. Throws unless x is in [0, 1].
double FinalScore(double x, const ProtocolParams& params);

std::vector<double> ChainWeights(std::span<const double> final_scores,
                                 const ProtocolParams& params);

struct FinalScoreRow {
  MinerId miner_id = 0;
  double s_temporal = 0.0;
  double x_normalised = 0.0;
  double s_final = 0.0;
  double w_chain = 0.0;

  friend bool operator==(const FinalScoreRow&, const FinalScoreRow&) = default;
};

struct FinalScoreReport {
  SimTime computed_at = 0.0;
  std::vector<FinalScoreRow> rows;
};

// Runs temporal aggregation through chain weights for the given cohort.
FinalScoreReport ComputeFinalScores(const ScoreLedger& ledger, SimTime now,
                                    std::span<const MinerId> miners,
                                    const ProtocolParams& params);

}  // namespace gradsim

#endif  // GRADSIM_SCORING_HPP_
