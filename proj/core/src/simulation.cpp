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

#include "gradsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gradsim/evaluation.hpp"
#include "gradsim/selection.hpp"
#include "gradsim/task_factory.hpp"

namespace gradsim {
namespace {

// Base-model sizes tasks are drawn from, in billions of parameters.
constexpr std::array<double, 9> kModelSizes = {0.07, 0.5, 1.0, 3.0, 7.0,
                                               8.0,  14.0, 32.0, 70.0};

// Stream ids for MixSeed.
enum : std::uint64_t {
  kTaskStream = 1,
  kSelectionStream = 2,
  kNoiseStream = 3,
  kLandscapeStream = 4,
  kAgentStreamBase = 1000,
};

std::size_t Index(TaskType type) { return static_cast<std::size_t>(type); }

bool SearchesLocally(StrategyKind kind) {
  return kind == StrategyKind::kLocalSearch ||
         kind == StrategyKind::kUnreliable ||
         kind == StrategyKind::kOverfitter;
}

void Require(bool ok, const char* what) {
  if (!ok) throw ProtocolError(what);
}

}  // namespace

void ValidateSimConfig(const SimConfig& c) {
  Require(c.n_rounds > 0, "n_rounds: must be positive");
  Require(c.tasks_per_round > 0, "tasks_per_round: must be positive");
  Require(c.rounds_per_day > 0, "rounds_per_day: must be positive");
  Require(c.max_retries >= 0, "max_retries: must be >= 0");
  Require(c.failure_rate >= 0.0 && c.failure_rate <= 1.0,
          "failure_rate: must lie in [0, 1]");
  Require(c.local_step >= 0.0 && std::isfinite(c.local_step),
          "local_step: must be finite and >= 0");
  Require(c.min_dataset_size >= kMinDatasetSize,
          "min_dataset_size: below the smallest splittable dataset");
  Require(c.max_dataset_size >= c.min_dataset_size,
          "max_dataset_size: must be >= min_dataset_size");
  const Population& p = c.population;
  Require(p.random_search >= 0 && p.local_search >= 0 && p.exploiter >= 0 &&
              p.overfitter >= 0 && p.unreliable >= 0,
          "population: counts must be >= 0");
  Require(p.total() > 0, "population: need at least one miner");
  Require(p.unreliable_failure_rate >= 0.0 && p.unreliable_failure_rate <= 1.0,
          "unreliable_failure_rate: must lie in [0, 1]");
  Require(p.overfitter == 0 || p.overfit_margin > 0.0,
          "overfit_margin: must be positive");
  ValidateLandscapeParams(c.landscape);
  ValidateParams(c.protocol);
}

double RetryDelay(double initial_hours, int attempts,
                  const ProtocolParams& params) {
  if (attempts < 1) {
    throw ProtocolError("retry_delay: attempts must be >= 1, got " +
                        std::to_string(attempts));
  }
  return initial_hours + params.retry_c * static_cast<double>(attempts);
}

Simulation::Simulation(const SimConfig& config)
    : config_(config),
      task_rng_(MixSeed(config.seed, kTaskStream)),
      selection_rng_(MixSeed(config.seed, kSelectionStream)),
      noise_rng_(MixSeed(config.seed, kNoiseStream)) {
  ValidateSimConfig(config_);

  Rng landscape_rng(MixSeed(config_.seed, kLandscapeStream));
  for (Landscape& l : category_landscapes_) {
    l = MakeLandscape(config_.landscape, landscape_rng);
  }

  const Population& pop = config_.population;
  const std::array<std::pair<StrategyKind, int>, 5> groups = {{
      {StrategyKind::kRandomSearch, pop.random_search},
      {StrategyKind::kLocalSearch, pop.local_search},
      {StrategyKind::kExploiter, pop.exploiter},
      {StrategyKind::kOverfitter, pop.overfitter},
      {StrategyKind::kUnreliable, pop.unreliable},
  }};
  for (const auto& [kind, count] : groups) {
    for (int i = 0; i < count; ++i) {
      MinerProfile m;
      m.id = static_cast<MinerId>(miners_.size());
      m.strategy.kind = kind;
      m.strategy.failure_rate = kind == StrategyKind::kUnreliable
                                    ? pop.unreliable_failure_rate
                                    : config_.failure_rate;
      if (kind == StrategyKind::kOverfitter) {
        m.strategy.overfit_margin = pop.overfit_margin;
      }
      ValidateStrategy(m.strategy);
      agents_.emplace_back(MixSeed(config_.seed, kAgentStreamBase + m.id));
      miners_.push_back(m);
    }
  }
}

void Simulation::RunRound() { Step(config_.tasks_per_round); }

void Simulation::RunRetryRound() { Step(0); }

void Simulation::Step(int new_tasks) {
  const SimTime now = clock_;
  const ProtocolParams& params = config_.protocol;

  RoundRecord record;
  record.round = round_;
  record.sim_time = now;
  record.best_weighted_loss = std::numeric_limits<double>::quiet_NaN();

  std::vector<ActiveTask> batch;
  batch.swap(delayed_);
  const double log_min = std::log(static_cast<double>(config_.min_dataset_size));
  const double log_max = std::log(static_cast<double>(config_.max_dataset_size));
  for (int i = 0; i < new_tasks; ++i) {
    const double model_size = kModelSizes[static_cast<std::size_t>(
        task_rng_.UniformInt(0, kModelSizes.size() - 1))];
    const auto dataset_size = std::clamp(
        static_cast<std::int64_t>(
            std::llround(std::exp(task_rng_.Uniform(log_min, log_max)))),
        config_.min_dataset_size, config_.max_dataset_size);
    TaskSpec spec = CreateTask(next_task_id_++, model_size, dataset_size, now,
                               task_rng_, params);
    Landscape landscape =
        JitterLandscape(category_landscapes_[Index(spec.task_type)],
                        config_.landscape, task_rng_);
    events_.Append(now, TaskCreatedEvent{round_, spec});
    batch.push_back({spec, spec.hours_allocated, std::move(landscape)});
    ++tasks_created_;
    ++record.tasks_created;
  }
  std::sort(batch.begin(), batch.end(),
            [](const ActiveTask& a, const ActiveTask& b) {
              return a.spec.id < b.spec.id;
            });

  double max_hours = 0.0;
  for (const ActiveTask& t : batch) {
    max_hours = std::max(max_hours, t.spec.hours_allocated);
  }
  const SimTime end_time = now + max_hours;

  std::vector<LedgerEntry> scores;
  for (ActiveTask& task : batch) ProcessTask(task, end_time, record, scores);
  for (const LedgerEntry& e : scores) ledger_.Append(e);

  clock_ = end_time;
  ++round_;
  rounds_.push_back(record);
  if (round_ % config_.rounds_per_day == 0) {
    for (MinerProfile& m : miners_) m.participated_today = false;
    PublishScores();
  }
}

void Simulation::ProcessTask(ActiveTask& task, SimTime end_time,
                             RoundRecord& record,
                             std::vector<LedgerEntry>& scores) {
  const ProtocolParams& params = config_.protocol;
  TaskSpec& spec = task.spec;
  const TaskType type = spec.task_type;
  const SimTime start = clock_;
  const SimTime deadline = start + spec.hours_allocated;
  spec.state = TaskState::kTraining;

  std::vector<MinerId> pool = SelectPool(miners_, type, selection_rng_, params);
  events_.Append(start,
                 PoolSelectedEvent{round_, spec.id, spec.attempts + 1, pool});

  // Exploiters act last so there is something public to copy.
  std::stable_partition(pool.begin(), pool.end(), [&](MinerId id) {
    return miners_[id].strategy.kind != StrategyKind::kExploiter;
  });

  std::vector<Candidate> candidates;
  candidates.reserve(pool.size());
  for (MinerId id : pool) {
    MinerProfile& miner = miners_[id];
    AgentState& agent = agents_[id];
    Candidate c;
    c.submission.task_id = spec.id;
    c.submission.miner_id = id;
    if (IsImageTask(type)) c.submission.losses = ImageLosses{};

    if (agent.rng.Bernoulli(miner.strategy.failure_rate)) {
      c.submission.completed = false;
      c.submission.submitted_at = deadline;
      candidates.push_back(std::move(c));
      continue;
    }
    c.submission.completed = true;

    const Candidate* original = nullptr;
    if (miner.strategy.kind == StrategyKind::kExploiter) {
      for (const Candidate& other : candidates) {
        if (!other.submission.completed ||
            miners_[other.submission.miner_id].strategy.kind ==
                StrategyKind::kExploiter) {
          continue;
        }
        if (original == nullptr ||
            WeightedLoss(other.submission.losses, params) <
                WeightedLoss(original->submission.losses, params)) {
          original = &other;
        }
      }
    }

    if (original != nullptr) {
      // A copied model evaluates to exactly the original's losses.
      c.theta = original->theta;
      c.submission.losses = original->submission.losses;
      c.submission.submitted_at =
          original->submission.submitted_at +
          0.5 * (deadline - original->submission.submitted_at);
    } else {
      c.theta = ChooseTheta(miner, type);
      const double margin = miner.strategy.kind == StrategyKind::kOverfitter
                                ? miner.strategy.overfit_margin
                                : 0.0;
      c.submission.losses =
          EvaluateLandscape(task.landscape, c.theta, type, noise_rng_, margin);
      c.submission.submitted_at =
          start + agent.rng.Uniform(0.1, 0.9) * spec.hours_allocated;
    }
    candidates.push_back(std::move(c));
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return a.submission.miner_id < b.submission.miner_id;
            });
  std::vector<SubmissionResult> subs;
  subs.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    events_.Append(start, SubmissionReceivedEvent{round_, c.submission});
    subs.push_back(c.submission);
  }

  const EvaluationRecord evaluation = EvaluateTask(spec, subs, params);
  for (MinerId id : pool) miners_[id].participated_today = true;

  if (evaluation.task_failed) {
    for (const SubmissionResult& s : subs) {
      RecordAssignment(miners_[s.miner_id], false, 0.0);
    }
    record.failed_submissions += static_cast<int>(subs.size());
    ++spec.attempts;
    if (spec.attempts > config_.max_retries) {
      spec.state = TaskState::kDropped;
      events_.Append(start, TaskDroppedEvent{round_, spec.id, spec.attempts});
      finished_.push_back(spec);
      ++record.tasks_dropped;
    } else {
      spec.hours_allocated = RetryDelay(task.initial_hours, spec.attempts, params);
      spec.state = TaskState::kDelayed;
      events_.Append(start, TaskDelayedEvent{round_, spec.id, spec.attempts,
                                             task.initial_hours,
                                             spec.hours_allocated});
      delayed_.push_back(std::move(task));
      ++record.tasks_delayed;
    }
    return;
  }

  const double weight = TaskWeight(spec.model_size_b, spec.hours_allocated);
  const int n_valid = static_cast<int>(evaluation.valid_set.size());
  TaskEvaluatedEvent event{round_, spec.id, type, weight, {}};
  for (std::size_t i = 0; i < evaluation.outcomes.size(); ++i) {
    const MinerOutcome& outcome = evaluation.outcomes[i];
    OutcomeRow row{outcome.miner_id, outcome.weighted_loss, outcome.rank,
                   outcome.flags, 0.0, 0.0};
    if (outcome.rank > 0) {
      row.task_score = TaskScore(outcome.rank, n_valid, params);
      row.adjusted_score = AdjustedScore(row.task_score, weight);
      scores.push_back(
          {outcome.miner_id, spec.id, row.adjusted_score, end_time});
      if (std::isnan(record.best_weighted_loss) ||
          outcome.weighted_loss < record.best_weighted_loss) {
        record.best_weighted_loss = outcome.weighted_loss;
      }
      if (outcome.rank == 1) public_best_[Index(type)] = candidates[i].theta;
    }
    // Quality samples are the adjusted score rescaled by the task weight.
    RecordAssignment(miners_[outcome.miner_id], !outcome.flags.failed,
                     row.task_score);
    if (!outcome.flags.failed) {
      Learn(outcome.miner_id, type, candidates[i].theta, outcome.weighted_loss);
    }
    record.duplicate_flags += outcome.flags.duplicate ? 1 : 0;
    record.suspicious_flags += outcome.flags.suspicious ? 1 : 0;
    record.failed_submissions += outcome.flags.failed ? 1 : 0;
    event.outcomes.push_back(row);
  }
  spec.state = TaskState::kEvaluated;
  events_.Append(start, std::move(event));
  finished_.push_back(spec);
  ++record.tasks_evaluated;
}

std::vector<double> Simulation::ChooseTheta(MinerProfile& miner,
                                            TaskType type) {
  AgentState& agent = agents_[miner.id];
  const int d = config_.landscape.dimension;
  std::vector<double> theta(static_cast<std::size_t>(d));

  const std::optional<std::vector<double>>* anchor = nullptr;
  if (SearchesLocally(miner.strategy.kind)) {
    anchor = &agent.best_theta[Index(type)];
  } else if (miner.strategy.kind == StrategyKind::kExploiter) {
    anchor = &public_best_[Index(type)];
  }

  if (anchor != nullptr && anchor->has_value()) {
    const double step = miner.strategy.kind == StrategyKind::kExploiter
                            ? 0.0
                            : config_.local_step;
    for (int k = 0; k < d; ++k) {
      theta[k] = std::clamp((**anchor)[k] + agent.rng.Normal(0.0, step), 0.0,
                            1.0);
    }
  } else {
    for (double& x : theta) x = agent.rng.Uniform01();
  }
  return theta;
}

void Simulation::Learn(MinerId miner, TaskType type,
                       std::span<const double> theta, double weighted_loss) {
  if (!SearchesLocally(miners_[miner].strategy.kind)) return;
  AgentState& agent = agents_[miner];
  auto& best = agent.best_theta[Index(type)];
  double& best_loss = agent.best_loss[Index(type)];
  if (!best.has_value() || weighted_loss < best_loss) {
    best.emplace(theta.begin(), theta.end());
    best_loss = weighted_loss;
  }
}

const FinalScoreReport& Simulation::PublishScores() {
  if (last_published_ && *last_published_ == clock_) return last_scores_;
  std::vector<MinerId> ids;
  ids.reserve(miners_.size());
  for (const MinerProfile& m : miners_) ids.push_back(m.id);
  last_scores_ = ComputeFinalScores(ledger_, clock_, ids, config_.protocol);
  last_published_ = clock_;
  events_.Append(clock_,
                 ScoresPublishedEvent{std::max(round_ - 1, 0), last_scores_.rows});
  return last_scores_;
}

SimSummary Simulation::Summary() const {
  SimSummary summary;
  summary.rounds = rounds_;
  summary.miners = miners_;
  summary.final_scores = last_scores_;
  summary.tasks = finished_;
  for (const ActiveTask& t : delayed_) summary.tasks.push_back(t.spec);
  std::sort(summary.tasks.begin(), summary.tasks.end(),
            [](const TaskSpec& a, const TaskSpec& b) { return a.id < b.id; });
  summary.tasks_created = tasks_created_;
  for (const TaskSpec& t : finished_) {
    if (t.state == TaskState::kEvaluated) ++summary.tasks_evaluated;
    if (t.state == TaskState::kDropped) ++summary.tasks_dropped;
  }
  return summary;
}

SimResult RunSimulation(const SimConfig& config) {
  Simulation sim(config);
  for (int r = 0; r < config.n_rounds; ++r) sim.RunRound();
  while (sim.has_delayed_tasks()) sim.RunRetryRound();
  sim.PublishScores();
  return {sim.Summary(), sim.events()};
}

}  // namespace gradsim
