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

#ifndef GRADSIM_PROTOCOL_HPP_
#define GRADSIM_PROTOCOL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gradsim/strategy.hpp"

namespace gradsim {

using MinerId = std::uint32_t;
using TaskId = std::uint64_t;
// Simulated clock, in hours.
using SimTime = double;

inline constexpr double kHoursPerDay = 24.0;

// A named contract violation: bad parameters, bad inputs, broken invariants.
class ProtocolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TaskType { kInstruct, kDpo, kGrpo, kImage };

inline constexpr std::array<TaskType, 4> kAllTaskTypes = {
    TaskType::kInstruct, TaskType::kDpo, TaskType::kGrpo, TaskType::kImage};

std::string_view ToString(TaskType type);
std::optional<TaskType> ParseTaskType(std::string_view name);
constexpr bool IsImageTask(TaskType type) { return type == TaskType::kImage; }

struct WindowWeight {
  double days;
  double weight;
};

// Every protocol constant. Defaults are the published network values except
// epsilon_duplicate, retry_c and vtrust, which have no published value.
struct ProtocolParams {
  // Task category distribution.
  double rho_instruct = 0.25;
  double rho_dpo = 0.10;
  double rho_grpo = 0.30;
  double rho_image = 0.35;

  // Miner selection.
  double alpha_default_score = 2.0;
  double gamma_min_score = 0.01;
  double lambda_top_multiplier = 3.0;

  // Dataset partitioning.
  double rho_test = 0.1;
  double rho_synth = 1.0;
  std::int64_t kappa_test = 1000;
  std::int64_t kappa_synth = 300;

  // Weighted loss.
  double omega_test_weight = 0.7;
  double delta_image_weight = 0.25;

  // Anti-gaming.
  double epsilon_duplicate = 1e-6;
  double alpha_suspicion = 0.5;

  // Task scores.
  double s_first = 3.0;
  double s_penalty = -1.0;
  double rho_penalty = 0.25;

  std::array<WindowWeight, 3> window_weights = {
      WindowWeight{1.0, 0.3}, WindowWeight{3.0, 0.3}, WindowWeight{7.0, 0.4}};

  // Final score transform.
  double beta_sigmoid = 0.7;
  double omega_linear = 0.05;
  double gamma_steepness = 9.0;
  double mu_shift = 0.5;
  double nu_power = 0.75;

  // Pool sizes per task, inclusive.
  std::int64_t text_pool_min = 8;
  std::int64_t text_pool_max = 15;
  std::int64_t image_pool_min = 15;
  std::int64_t image_pool_max = 25;

  // Hours added per retry attempt.
  double retry_c = 1.0;
  double vtrust = 1.0;
};

double CategoryWeight(const ProtocolParams& params, TaskType type);

// Returns a copy of `params` if every invariant holds; otherwise throws
// ProtocolError whose message starts with the violated field
// (e.g. "category weights: ...").
ProtocolParams ValidateParams(const ProtocolParams& params);

struct PartitionPlan {
  std::int64_t n_train = 0;
  std::int64_t n_test = 0;
  std::int64_t n_synth = 0;

  friend bool operator==(const PartitionPlan&, const PartitionPlan&) = default;
};

enum class TaskState { kPending, kDelayed, kTraining, kEvaluated, kDropped };

std::string_view ToString(TaskState state);

struct TaskSpec {
  TaskId id = 0;
  TaskType task_type = TaskType::kInstruct;
  double model_size_b = 0.0;
  std::int64_t dataset_size = 0;
  PartitionPlan partition;
  double hours_allocated = 0.0;
  int attempts = 0;
  SimTime created_at = 0.0;
  TaskState state = TaskState::kPending;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct MinerProfile {
  MinerId id = 0;
  // Running mean of non-negative per-task quality samples.
  double quality_score = 0.0;
  bool participated_today = false;
  // completed / assigned; 1.0 until the first assignment.
  double reliability = 1.0;
  std::uint32_t assigned = 0;
  std::uint32_t completed = 0;
  std::uint32_t quality_samples = 0;
  Strategy strategy;
};

// Folds one task outcome into the profile: counts the assignment, updates
// reliability and the running-mean quality score (sample clipped at 0).
void RecordAssignment(MinerProfile& miner, bool completed,
                      double quality_sample);

struct TextLosses {
  double test = 0.0;
  double synth = 0.0;
  friend bool operator==(const TextLosses&, const TextLosses&) = default;
};

struct ImageLosses {
  double text_guided = 0.0;
  double no_text = 0.0;
  friend bool operator==(const ImageLosses&, const ImageLosses&) = default;
};

using Losses = std::variant<TextLosses, ImageLosses>;

// (test, synth) for text losses, (text_guided, no_text) for image losses.
std::pair<double, double> LossComponents(const Losses& losses);

struct SubmissionResult {
  TaskId task_id = 0;
  MinerId miner_id = 0;
  Losses losses;
  SimTime submitted_at = 0.0;
  bool completed = false;

  friend bool operator==(const SubmissionResult&,
                         const SubmissionResult&) = default;
};

struct SubmissionFlags {
  bool duplicate = false;
  bool suspicious = false;
  bool failed = false;

  bool any() const { return duplicate || suspicious || failed; }
  friend bool operator==(const SubmissionFlags&,
                         const SubmissionFlags&) = default;
};

struct MinerOutcome {
  MinerId miner_id = 0;
  // NaN for failed submissions.
  double weighted_loss = 0.0;
  // 1-based rank within the valid set; 0 when not ranked.
  int rank = 0;
  SubmissionFlags flags;
};

struct EvaluationRecord {
  TaskId task_id = 0;
  // One entry per submission, in submission input order.
  std::vector<MinerOutcome> outcomes;
  // Completed, unflagged miners ordered by rank.
  std::vector<MinerId> valid_set;
  // No submission completed; the task must be retried.
  bool task_failed = false;
};

struct LedgerEntry {
  MinerId miner_id = 0;
  TaskId task_id = 0;
  double adjusted_score = 0.0;
  SimTime timestamp = 0.0;
};

// Append-only record of adjusted scores. Timestamps are non-decreasing and
// each (miner, task) pair appears at most once; Append throws otherwise.
class ScoreLedger {
 public:
  void Append(const LedgerEntry& entry);

  std::span<const LedgerEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LedgerEntry> entries_;
  std::set<std::pair<MinerId, TaskId>> seen_;
};

}  // namespace gradsim

#endif  // GRADSIM_PROTOCOL_HPP_
