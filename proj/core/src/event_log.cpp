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

#include "gradsim/event_log.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

namespace gradsim {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 7> kKindNames = {
    "TaskCreated",  "PoolSelected", "SubmissionReceived", "TaskEvaluated",
    "TaskDelayed",  "TaskDropped",  "ScoresPublished"};

// NaN has no JSON spelling; null stands in for it.
Json Num(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

double GetNum(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' is not a number");
  }
  return v.get<double>();
}

template <class T>
T GetInt(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' is not an integer");
  }
  return v.get<T>();
}

bool GetBool(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_boolean()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' is not a boolean");
  }
  return v.get<bool>();
}

std::string GetString(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_string()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' is not a string");
  }
  return v.get<std::string>();
}

TaskType GetTaskType(const Json& j, const char* key) {
  const std::string name = GetString(j, key);
  if (auto t = ParseTaskType(name)) return *t;
  throw std::invalid_argument("unknown task type '" + name + "'");
}

TaskState GetTaskState(const Json& j, const char* key) {
  const std::string name = GetString(j, key);
  for (TaskState s : {TaskState::kPending, TaskState::kDelayed,
                      TaskState::kTraining, TaskState::kEvaluated,
                      TaskState::kDropped}) {
    if (ToString(s) == name) return s;
  }
  throw std::invalid_argument("unknown task state '" + name + "'");
}

Json ToJson(const TaskCreatedEvent& e) {
  const TaskSpec& t = e.task;
  return Json{{"round", e.round},
              {"task_id", t.id},
              {"task_type", ToString(t.task_type)},
              {"model_size_b", t.model_size_b},
              {"dataset_size", t.dataset_size},
              {"n_train", t.partition.n_train},
              {"n_test", t.partition.n_test},
              {"n_synth", t.partition.n_synth},
              {"hours_allocated", t.hours_allocated},
              {"attempts", t.attempts},
              {"created_at", t.created_at},
              {"state", ToString(t.state)}};
}

TaskCreatedEvent TaskCreatedFromJson(const Json& j) {
  TaskCreatedEvent e;
  e.round = GetInt<int>(j, "round");
  TaskSpec& t = e.task;
  t.id = GetInt<TaskId>(j, "task_id");
  t.task_type = GetTaskType(j, "task_type");
  t.model_size_b = GetNum(j, "model_size_b");
  t.dataset_size = GetInt<std::int64_t>(j, "dataset_size");
  t.partition.n_train = GetInt<std::int64_t>(j, "n_train");
  t.partition.n_test = GetInt<std::int64_t>(j, "n_test");
  t.partition.n_synth = GetInt<std::int64_t>(j, "n_synth");
  t.hours_allocated = GetNum(j, "hours_allocated");
  t.attempts = GetInt<int>(j, "attempts");
  t.created_at = GetNum(j, "created_at");
  t.state = GetTaskState(j, "state");
  return e;
}

Json ToJson(const PoolSelectedEvent& e) {
  return Json{{"round", e.round},
              {"task_id", e.task_id},
              {"attempt", e.attempt},
              {"miners", e.miners}};
}

PoolSelectedEvent PoolSelectedFromJson(const Json& j) {
  PoolSelectedEvent e;
  e.round = GetInt<int>(j, "round");
  e.task_id = GetInt<TaskId>(j, "task_id");
  e.attempt = GetInt<int>(j, "attempt");
  const Json& miners = j.at("miners");
  if (!miners.is_array()) throw std::invalid_argument("'miners' not an array");
  for (const Json& m : miners) {
    if (!m.is_number_unsigned()) {
      throw std::invalid_argument("'miners' holds a non-id value");
    }
    e.miners.push_back(m.get<MinerId>());
  }
  return e;
}

Json ToJson(const SubmissionReceivedEvent& e) {
  const SubmissionResult& s = e.submission;
  Json j{{"round", e.round},
         {"task_id", s.task_id},
         {"miner_id", s.miner_id},
         {"completed", s.completed},
         {"submitted_at", s.submitted_at}};
  if (const auto* text = std::get_if<TextLosses>(&s.losses)) {
    j["modality"] = "text";
    j["l_test"] = Num(text->test);
    j["l_synth"] = Num(text->synth);
  } else {
    const auto& image = std::get<ImageLosses>(s.losses);
    j["modality"] = "image";
    j["l_text_guided"] = Num(image.text_guided);
    j["l_no_text"] = Num(image.no_text);
  }
  return j;
}

SubmissionReceivedEvent SubmissionFromJson(const Json& j) {
  SubmissionReceivedEvent e;
  e.round = GetInt<int>(j, "round");
  SubmissionResult& s = e.submission;
  s.task_id = GetInt<TaskId>(j, "task_id");
  s.miner_id = GetInt<MinerId>(j, "miner_id");
  s.completed = GetBool(j, "completed");
  s.submitted_at = GetNum(j, "submitted_at");
  const std::string modality = GetString(j, "modality");
  if (modality == "text") {
    s.losses = TextLosses{GetNum(j, "l_test"), GetNum(j, "l_synth")};
  } else if (modality == "image") {
    s.losses = ImageLosses{GetNum(j, "l_text_guided"), GetNum(j, "l_no_text")};
  } else {
    throw std::invalid_argument("unknown modality '" + modality + "'");
  }
  return e;
}

Json ToJson(const TaskEvaluatedEvent& e) {
  Json outcomes = Json::array();
  for (const OutcomeRow& o : e.outcomes) {
    outcomes.push_back(Json{{"miner_id", o.miner_id},
                            {"weighted_loss", Num(o.weighted_loss)},
                            {"rank", o.rank},
                            {"duplicate", o.flags.duplicate},
                            {"suspicious", o.flags.suspicious},
                            {"failed", o.flags.failed},
                            {"task_score", o.task_score},
                            {"adjusted_score", o.adjusted_score}});
  }
  return Json{{"round", e.round},
              {"task_id", e.task_id},
              {"task_type", ToString(e.task_type)},
              {"task_weight", e.task_weight},
              {"outcomes", std::move(outcomes)}};
}

TaskEvaluatedEvent TaskEvaluatedFromJson(const Json& j) {
  TaskEvaluatedEvent e;
  e.round = GetInt<int>(j, "round");
  e.task_id = GetInt<TaskId>(j, "task_id");
  e.task_type = GetTaskType(j, "task_type");
  e.task_weight = GetNum(j, "task_weight");
  const Json& outcomes = j.at("outcomes");
  if (!outcomes.is_array()) {
    throw std::invalid_argument("'outcomes' not an array");
  }
  for (const Json& o : outcomes) {
    OutcomeRow row;
    row.miner_id = GetInt<MinerId>(o, "miner_id");
    row.weighted_loss = GetNum(o, "weighted_loss");
    row.rank = GetInt<int>(o, "rank");
    row.flags.duplicate = GetBool(o, "duplicate");
    row.flags.suspicious = GetBool(o, "suspicious");
    row.flags.failed = GetBool(o, "failed");
    row.task_score = GetNum(o, "task_score");
    row.adjusted_score = GetNum(o, "adjusted_score");
    e.outcomes.push_back(row);
  }
  return e;
}

Json ToJson(const TaskDelayedEvent& e) {
  return Json{{"round", e.round},
              {"task_id", e.task_id},
              {"attempts", e.attempts},
              {"initial_hours", e.initial_hours},
              {"hours_allocated", e.hours_allocated}};
}

TaskDelayedEvent TaskDelayedFromJson(const Json& j) {
  return {GetInt<int>(j, "round"), GetInt<TaskId>(j, "task_id"),
          GetInt<int>(j, "attempts"), GetNum(j, "initial_hours"),
          GetNum(j, "hours_allocated")};
}

Json ToJson(const TaskDroppedEvent& e) {
  return Json{
      {"round", e.round}, {"task_id", e.task_id}, {"attempts", e.attempts}};
}

TaskDroppedEvent TaskDroppedFromJson(const Json& j) {
  return {GetInt<int>(j, "round"), GetInt<TaskId>(j, "task_id"),
          GetInt<int>(j, "attempts")};
}

Json ToJson(const ScoresPublishedEvent& e) {
  Json rows = Json::array();
  for (const FinalScoreRow& r : e.rows) {
    rows.push_back(Json{{"miner_id", r.miner_id},
                        {"s_temporal", r.s_temporal},
                        {"x", r.x_normalised},
                        {"s_final", r.s_final},
                        {"w_chain", r.w_chain}});
  }
  return Json{{"round", e.round}, {"rows", std::move(rows)}};
}

ScoresPublishedEvent ScoresFromJson(const Json& j) {
  ScoresPublishedEvent e;
  e.round = GetInt<int>(j, "round");
  const Json& rows = j.at("rows");
  if (!rows.is_array()) throw std::invalid_argument("'rows' not an array");
  for (const Json& r : rows) {
    e.rows.push_back({GetInt<MinerId>(r, "miner_id"), GetNum(r, "s_temporal"),
                      GetNum(r, "x"), GetNum(r, "s_final"),
                      GetNum(r, "w_chain")});
  }
  return e;
}

bool SameNumber(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

}  // namespace

bool operator==(const OutcomeRow& a, const OutcomeRow& b) {
  return a.miner_id == b.miner_id && SameNumber(a.weighted_loss, b.weighted_loss) &&
         a.rank == b.rank && a.flags == b.flags &&
         a.task_score == b.task_score && a.adjusted_score == b.adjusted_score;
}

std::string_view ToString(EventKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

int EventRecord::round() const {
  return std::visit([](const auto& p) { return p.round; }, payload);
}

std::string SerializeEvent(const EventRecord& record) {
  Json j{{"seq", record.seq},
         {"sim_time", record.sim_time},
         {"kind", ToString(record.kind())}};
  j["payload"] = std::visit([](const auto& p) { return ToJson(p); },
                            record.payload);
  return j.dump();
}

EventRecord ParseEvent(std::string_view line, std::size_t line_number) {
  try {
    const Json j = Json::parse(line);
    if (!j.is_object()) throw std::invalid_argument("not a JSON object");
    EventRecord record;
    record.seq = GetInt<std::uint64_t>(j, "seq");
    record.sim_time = GetNum(j, "sim_time");
    if (!std::isfinite(record.sim_time)) {
      throw std::invalid_argument("sim_time is not finite");
    }
    const std::string kind = GetString(j, "kind");
    const Json& p = j.at("payload");
    if (!p.is_object()) throw std::invalid_argument("payload not an object");
    if (kind == "TaskCreated") {
      record.payload = TaskCreatedFromJson(p);
    } else if (kind == "PoolSelected") {
      record.payload = PoolSelectedFromJson(p);
    } else if (kind == "SubmissionReceived") {
      record.payload = SubmissionFromJson(p);
    } else if (kind == "TaskEvaluated") {
      record.payload = TaskEvaluatedFromJson(p);
    } else if (kind == "TaskDelayed") {
      record.payload = TaskDelayedFromJson(p);
    } else if (kind == "TaskDropped") {
      record.payload = TaskDroppedFromJson(p);
    } else if (kind == "ScoresPublished") {
      record.payload = ScoresFromJson(p);
    } else {
      throw std::invalid_argument("unknown kind '" + kind + "'");
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw EventLogError(line_number, e.what());
  } catch (const std::invalid_argument& e) {
    throw EventLogError(line_number, e.what());
  }
}

const EventRecord& EventLog::Append(SimTime sim_time, EventPayload payload) {
  if (!records_.empty() && sim_time < records_.back().sim_time) {
    throw ProtocolError("event log: sim_time must be non-decreasing");
  }
  const std::uint64_t seq = records_.empty() ? 1 : records_.back().seq + 1;
  records_.push_back({seq, sim_time, std::move(payload)});
  return records_.back();
}

void EventLog::Write(std::ostream& out) const {
  for (const EventRecord& r : records_) out << SerializeEvent(r) << '\n';
}

std::vector<EventRecord> ReadEventLog(std::istream& in) {
  std::vector<EventRecord> records;
  std::string line;
  std::size_t line_number = 0;
  std::size_t pending_blank = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      ++pending_blank;
      continue;
    }
    if (pending_blank > 0) {
      throw EventLogError(line_number - pending_blank, "blank record");
    }
    EventRecord r = ParseEvent(line, line_number);
    if (!records.empty()) {
      if (r.seq <= records.back().seq) {
        throw EventLogError(line_number, "seq does not increase");
      }
      if (r.sim_time < records.back().sim_time) {
        throw EventLogError(line_number, "sim_time decreases");
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace gradsim
