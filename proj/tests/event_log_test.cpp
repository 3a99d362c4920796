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
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

namespace gradsim {
namespace {

std::vector<EventPayload> OneOfEach() {
  TaskSpec task;
  task.id = 7;
  task.task_type = TaskType::kDpo;
  task.model_size_b = 0.07;
  task.dataset_size = 12345;
  task.partition = {11110, 1234, 300};
  task.hours_allocated = 4.123456789012345;
  task.created_at = 1.0 / 3.0;
  task.state = TaskState::kPending;

  SubmissionResult text{7, 3, TextLosses{0.1, 0.30000000000000004}, 2.5, true};
  SubmissionResult image{8, 4, ImageLosses{1e-300, 7.0}, 3.0, true};
  SubmissionResult failed{7, 5, TextLosses{}, 9.0, false};

  OutcomeRow ranked{3, 0.2, 1, {}, 3.0, 33.9411254969542811};
  OutcomeRow dropped{5, std::numeric_limits<double>::quiet_NaN(), 0,
                     SubmissionFlags{false, false, true}, 0.0, 0.0};
  OutcomeRow dup{6, 0.2, 0, SubmissionFlags{true, true, false}, 0.0, 0.0};

  FinalScoreRow row{3, -0.25, 0.0, 0.023755035436977045, 0.011};
  return {TaskCreatedEvent{0, task},
          PoolSelectedEvent{0, 7, 1, {3, 9, 1}},
          SubmissionReceivedEvent{0, text},
          SubmissionReceivedEvent{0, image},
          SubmissionReceivedEvent{1, failed},
          TaskEvaluatedEvent{1, 7, TaskType::kDpo, 11.5, {ranked, dropped, dup}},
          TaskDelayedEvent{2, 7, 1, 4.0, 5.0},
          TaskDroppedEvent{3, 7, 4},
          ScoresPublishedEvent{3, {row}}};
}

TEST(EventLogTest, RoundTripsEveryKind) {
  std::uint64_t seq = 1;
  for (EventPayload& p : OneOfEach()) {
    const EventRecord record{seq++, 0.1 * static_cast<double>(seq),
                             std::move(p)};
    const std::string line = SerializeEvent(record);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(ParseEvent(line), record) << line;
    EXPECT_EQ(SerializeEvent(ParseEvent(line)), line);
  }
}

TEST(EventLogTest, KindNamesAreStable) {
  EXPECT_EQ(ToString(EventKind::kTaskCreated), "TaskCreated");
  EXPECT_EQ(ToString(EventKind::kScoresPublished), "ScoresPublished");
  const EventRecord r{1, 0.0, TaskDroppedEvent{2, 9, 4}};
  const std::string line = SerializeEvent(r);
  EXPECT_NE(line.find("\"kind\":\"TaskDropped\""), std::string::npos);
  EXPECT_EQ(r.round(), 2);
}

TEST(EventLogTest, NanIsWrittenAsNull) {
  OutcomeRow row{1, std::numeric_limits<double>::quiet_NaN(), 0,
                 SubmissionFlags{false, false, true}, 0.0, 0.0};
  const EventRecord r{1, 0.0,
                      TaskEvaluatedEvent{0, 1, TaskType::kImage, 1.0, {row}}};
  const std::string line = SerializeEvent(r);
  EXPECT_NE(line.find("\"weighted_loss\":null"), std::string::npos) << line;
  const auto back = std::get<TaskEvaluatedEvent>(ParseEvent(line).payload);
  EXPECT_TRUE(std::isnan(back.outcomes[0].weighted_loss));
}

TEST(EventLogTest, AppendAssignsSequenceNumbers) {
  EventLog log;
  EXPECT_EQ(log.Append(0.0, TaskDroppedEvent{0, 1, 1}).seq, 1u);
  EXPECT_EQ(log.Append(0.0, TaskDroppedEvent{0, 2, 1}).seq, 2u);
  EXPECT_EQ(log.Append(3.0, TaskDroppedEvent{1, 3, 1}).seq, 3u);
  EXPECT_THROW(log.Append(2.0, TaskDroppedEvent{1, 4, 1}), std::exception);
  EXPECT_EQ(log.size(), 3u);
}

TEST(EventLogTest, WriteThenReadIsIdentity) {
  EventLog log;
  double t = 0.0;
  for (EventPayload& p : OneOfEach()) log.Append(t += 0.7, std::move(p));
  std::stringstream buffer;
  log.Write(buffer);
  const std::vector<EventRecord> back = ReadEventLog(buffer);
  ASSERT_EQ(back.size(), log.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i], log.records()[i]);
  }
}

TEST(EventLogTest, EmptyLogReadsAsNothing) {
  std::istringstream in("");
  EXPECT_TRUE(ReadEventLog(in).empty());
  std::istringstream blank("\n\n");
  EXPECT_TRUE(ReadEventLog(blank).empty());
}

std::size_t FailingLine(const std::string& text) {
  std::istringstream in(text);
  try {
    ReadEventLog(in);
  } catch (const EventLogError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("record ", 0), 0u) << e.what();
    return e.line();
  }
  return 0;
}

TEST(EventLogTest, NamesFirstBadRecord) {
  EventLog log;
  log.Append(0.0, TaskDroppedEvent{0, 1, 1});
  log.Append(1.0, TaskDroppedEvent{0, 2, 1});
  log.Append(2.0, TaskDroppedEvent{0, 3, 1});
  std::ostringstream out;
  log.Write(out);
  const std::string good = out.str();
  ASSERT_EQ(FailingLine(good), 0u);

  // Truncate mid-record.
  EXPECT_EQ(FailingLine(good.substr(0, good.size() - 10)), 3u);
  // Garbage in the middle.
  std::string corrupt = good;
  corrupt.replace(corrupt.find('\n') + 1, 1, "#");
  EXPECT_EQ(FailingLine(corrupt), 2u);
  // A blank line followed by more records.
  std::string gap = good;
  gap.insert(gap.find('\n') + 1, "\n");
  EXPECT_EQ(FailingLine(gap), 2u);
}

TEST(EventLogTest, RejectsOrderingViolations) {
  const std::string a = SerializeEvent({1, 5.0, TaskDroppedEvent{0, 1, 1}});
  const std::string b = SerializeEvent({1, 6.0, TaskDroppedEvent{0, 2, 1}});
  const std::string c = SerializeEvent({2, 4.0, TaskDroppedEvent{0, 3, 1}});
  EXPECT_EQ(FailingLine(a + "\n" + b + "\n"), 2u);  // seq repeats
  EXPECT_EQ(FailingLine(a + "\n" + c + "\n"), 2u);  // time goes back
}

TEST(EventLogTest, RejectsWrongTypes) {
  EXPECT_THROW(ParseEvent("{}", 4), EventLogError);
  EXPECT_THROW(ParseEvent(R"({"seq":1,"sim_time":0,"kind":"Nope","payload":{}})"),
               EventLogError);
  EXPECT_THROW(
      ParseEvent(
          R"({"seq":1,"sim_time":0,"kind":"TaskDropped","payload":{"round":0,"task_id":"x","attempts":1}})"),
      EventLogError);
  EXPECT_THROW(
      ParseEvent(
          R"({"seq":1,"sim_time":0,"kind":"TaskDropped","payload":{"round":0,"task_id":2}})"),
      EventLogError);
  try {
    ParseEvent("not json", 12);
    FAIL();
  } catch (const EventLogError& e) {
    EXPECT_EQ(e.line(), 12u);
  }
}

}  // namespace
}  // namespace gradsim
