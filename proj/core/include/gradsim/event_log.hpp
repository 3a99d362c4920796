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

#ifndef GRADSIM_EVENT_LOG_HPP_
#define GRADSIM_EVENT_LOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gradsim/protocol.hpp"
#include "gradsim/scoring.hpp"

namespace gradsim {

enum class EventKind {
  kTaskCreated,
  kPoolSelected,
  kSubmissionReceived,
  kTaskEvaluated,
  kTaskDelayed,
  kTaskDropped,
  kScoresPublished,
};

std::string_view ToString(EventKind kind);

struct TaskCreatedEvent {
  int round = 0;
  TaskSpec task;
  friend bool operator==(const TaskCreatedEvent&,
                         const TaskCreatedEvent&) = default;
};

struct PoolSelectedEvent {
  int round = 0;
  TaskId task_id = 0;
  int attempt = 0;
  std::vector<MinerId> miners;  // pick order
  friend bool operator==(const PoolSelectedEvent&,
                         const PoolSelectedEvent&) = default;
};

struct SubmissionReceivedEvent {
  int round = 0;
  SubmissionResult submission;
  friend bool operator==(const SubmissionReceivedEvent&,
                         const SubmissionReceivedEvent&) = default;
};

struct OutcomeRow {
  MinerId miner_id = 0;
  double weighted_loss = 0.0;  // NaN when failed
  int rank = 0;
  SubmissionFlags flags;
  double task_score = 0.0;
  double adjusted_score = 0.0;
  // NaN compares equal to NaN here so records round-trip.
  friend bool operator==(const OutcomeRow& a, const OutcomeRow& b);
};

struct TaskEvaluatedEvent {
  int round = 0;
  TaskId task_id = 0;
  TaskType task_type = TaskType::kInstruct;
  double task_weight = 0.0;
  std::vector<OutcomeRow> outcomes;
  friend bool operator==(const TaskEvaluatedEvent&,
                         const TaskEvaluatedEvent&) = default;
};

struct TaskDelayedEvent {
  int round = 0;
  TaskId task_id = 0;
  int attempts = 0;
  double initial_hours = 0.0;
  double hours_allocated = 0.0;
  friend bool operator==(const TaskDelayedEvent&,
                         const TaskDelayedEvent&) = default;
};

struct TaskDroppedEvent {
  int round = 0;
  TaskId task_id = 0;
  int attempts = 0;
  friend bool operator==(const TaskDroppedEvent&,
                         const TaskDroppedEvent&) = default;
};

struct ScoresPublishedEvent {
  int round = 0;
  std::vector<FinalScoreRow> rows;
  friend bool operator==(const ScoresPublishedEvent&,
                         const ScoresPublishedEvent&) = default;
};

// Alternative order matches EventKind.
using EventPayload =
    std::variant<TaskCreatedEvent, PoolSelectedEvent, SubmissionReceivedEvent,
                 TaskEvaluatedEvent, TaskDelayedEvent, TaskDroppedEvent,
                 ScoresPublishedEvent>;

struct EventRecord {
  std::uint64_t seq = 0;
  SimTime sim_time = 0.0;
  EventPayload payload;

  EventKind kind() const { return static_cast<EventKind>(payload.index()); }
  int round() const;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

class EventLogError : public std::runtime_error {
 public:
  EventLogError(std::size_t line, const std::string& what)
      : std::runtime_error("record " + std::to_string(line) + ": " + what),
        line_(line) {}
  // 1-based line of the first bad record.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One JSON object per record, no trailing newline. Doubles are written in
// shortest round-trip form.
std::string SerializeEvent(const EventRecord& record);
// Throws EventLogError(line) on malformed input.
EventRecord ParseEvent(std::string_view line, std::size_t line_number = 1);

// In-memory append-only log; assigns strictly increasing sequence numbers
// and rejects time running backwards.
class EventLog {
 public:
  const EventRecord& Append(SimTime sim_time, EventPayload payload);

  std::span<const EventRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void Write(std::ostream& out) const;

 private:
  std::vector<EventRecord> records_;
};

// Reads a newline-delimited log, checking seq strictly increases and
// sim_time never decreases. Blank trailing lines are ignored.
std::vector<EventRecord> ReadEventLog(std::istream& in);

}  // namespace gradsim

#endif  // GRADSIM_EVENT_LOG_HPP_
