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

#ifndef GRADSIM_SIMULATION_HPP_
#define GRADSIM_SIMULATION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gradsim/event_log.hpp"
#include "gradsim/landscape.hpp"
#include "gradsim/protocol.hpp"
#include "gradsim/rng.hpp"
#include "gradsim/scoring.hpp"

namespace gradsim {

// Number of agents per strategy. Miner ids are assigned in this order.
struct Population {
  int random_search = 0;
  int local_search = 12;
  int exploiter = 2;
  int overfitter = 1;
  int unreliable = 3;
  double unreliable_failure_rate = 0.5;
  double overfit_margin = 0.1;

  int total() const {
    return random_search + local_search + exploiter + overfitter + unreliable;
  }
};

struct SimConfig {
  int n_rounds = 50;
  int tasks_per_round = 4;
  std::uint64_t seed = 42;
  // Rounds per simulated day; participation resets and scores publish on
  // day boundaries.
  int rounds_per_day = 4;
  int max_retries = 3;
  // Background failure probability for agents other than Unreliable.
  double failure_rate = 0.0;
  // Per-axis stddev of a local-search perturbation.
  double local_step = 0.08;
  std::int64_t min_dataset_size = 10'000;
  std::int64_t max_dataset_size = 500'000;
  LandscapeParams landscape;
  Population population;
  ProtocolParams protocol;
};

// Throws ProtocolError naming the first violated field.
void ValidateSimConfig(const SimConfig& config);

// Delay allocation for a retried task: initial + retry_c * attempts.
// Throws ProtocolError for attempts < 1.
double RetryDelay(double initial_hours, int attempts,
                  const ProtocolParams& params);

struct RoundRecord {
  int round = 0;
  SimTime sim_time = 0.0;
  int tasks_created = 0;
  int tasks_evaluated = 0;
  int tasks_delayed = 0;
  int tasks_dropped = 0;
  // Lowest weighted loss in any valid set this round; NaN if none.
  double best_weighted_loss = 0.0;
  int duplicate_flags = 0;
  int suspicious_flags = 0;
  int failed_submissions = 0;
};

struct SimSummary {
  // One record per configured round, followed by any retry-only rounds
  // needed to settle tasks still delayed at the end.
  std::vector<RoundRecord> rounds;
  std::vector<MinerProfile> miners;
  FinalScoreReport final_scores;
  std::vector<TaskSpec> tasks;  // final state of every created task
  int tasks_created = 0;
  int tasks_evaluated = 0;
  int tasks_dropped = 0;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& config);

  // Runs one round: new tasks plus queued retries, pool selection,
  // submissions, evaluation, ledger append, profile updates.
  void RunRound();
  // A round that only processes queued retries.
  void RunRetryRound();

  bool has_delayed_tasks() const { return !delayed_.empty(); }
  int round() const { return round_; }
  SimTime now() const { return clock_; }

  const SimConfig& config() const { return config_; }
  const EventLog& events() const { return events_; }
  const ScoreLedger& ledger() const { return ledger_; }
  std::span<const MinerProfile> miners() const { return miners_; }
  std::span<const RoundRecord> rounds() const { return rounds_; }

  // Publishes scores now unless they were already published at this time.
  const FinalScoreReport& PublishScores();
  SimSummary Summary() const;

 private:
  struct ActiveTask {
    TaskSpec spec;
    double initial_hours = 0.0;
    Landscape landscape;
  };

  struct Candidate {
    SubmissionResult submission;
    std::vector<double> theta;
  };

  struct AgentState {
    explicit AgentState(std::uint64_t seed) : rng(seed) {}
    Rng rng;
    std::array<std::optional<std::vector<double>>, 4> best_theta;
    std::array<double, 4> best_loss{};
  };

  void Step(int new_tasks);
  void ProcessTask(ActiveTask& task, SimTime end_time, RoundRecord& record,
                   std::vector<LedgerEntry>& scores);
  std::vector<double> ChooseTheta(MinerProfile& miner, TaskType type);
  void Learn(MinerId miner, TaskType type, std::span<const double> theta,
             double weighted_loss);

  SimConfig config_;
  std::vector<MinerProfile> miners_;
  std::vector<AgentState> agents_;
  std::array<Landscape, 4> category_landscapes_;
  std::array<std::optional<std::vector<double>>, 4> public_best_;
  Rng task_rng_;
  Rng selection_rng_;
  Rng noise_rng_;
  std::vector<ActiveTask> delayed_;
  std::vector<TaskSpec> finished_;
  ScoreLedger ledger_;
  EventLog events_;
  std::vector<RoundRecord> rounds_;
  FinalScoreReport last_scores_;
  std::optional<SimTime> last_published_;
  SimTime clock_ = 0.0;
  int round_ = 0;
  TaskId next_task_id_ = 1;
  int tasks_created_ = 0;
};

struct SimResult {
  SimSummary summary;
  EventLog events;
};

// n_rounds of RunRound, retry-only rounds until no task is left delayed,
// then a final score publication.
SimResult RunSimulation(const SimConfig& config);

}  // namespace gradsim

#endif  // GRADSIM_SIMULATION_HPP_
