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

#include "gradsim/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace gradsim {
namespace {

struct MinerTally {
  int selected = 0;
  int completed = 0;
  int credited = 0;
  int wins = 0;
  int duplicate = 0;
  int suspicious = 0;
  double adjusted_total = 0.0;
};

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatRoundsTable(std::span<const RoundRecord> rounds) {
  std::string out =
      "round\tsim_time\ttasks_created\ttasks_evaluated\ttasks_delayed\t"
      "tasks_dropped\tbest_weighted_loss\tduplicate_flags\tsuspicious_flags\t"
      "failed_submissions\n";
  for (const RoundRecord& r : rounds) {
    out += std::to_string(r.round) + '\t' + FormatDouble(r.sim_time) + '\t' +
           std::to_string(r.tasks_created) + '\t' +
           std::to_string(r.tasks_evaluated) + '\t' +
           std::to_string(r.tasks_delayed) + '\t' +
           std::to_string(r.tasks_dropped) + '\t' +
           FormatDouble(r.best_weighted_loss) + '\t' +
           std::to_string(r.duplicate_flags) + '\t' +
           std::to_string(r.suspicious_flags) + '\t' +
           std::to_string(r.failed_submissions) + '\n';
  }
  return out;
}

std::string FormatFinalScoresTable(const FinalScoreReport& report,
                                   std::span<const MinerProfile> miners) {
  std::unordered_map<MinerId, const MinerProfile*> by_id;
  for (const MinerProfile& m : miners) by_id.emplace(m.id, &m);

  std::string out =
      "miner\tstrategy\ts_temporal\tx_normalised\ts_final\tw_chain\t"
      "quality_score\treliability\n";
  for (const FinalScoreRow& row : report.rows) {
    const auto it = by_id.find(row.miner_id);
    const MinerProfile* m = it == by_id.end() ? nullptr : it->second;
    out += std::to_string(row.miner_id) + '\t' +
           std::string(m ? ToString(m->strategy.kind) : "?") + '\t' +
           FormatDouble(row.s_temporal) + '\t' +
           FormatDouble(row.x_normalised) + '\t' + FormatDouble(row.s_final) +
           '\t' + FormatDouble(row.w_chain) + '\t' +
           FormatDouble(m ? m->quality_score : 0.0) + '\t' +
           FormatDouble(m ? m->reliability : 0.0) + '\n';
  }
  return out;
}

std::vector<RoundRecord> RoundsFromEvents(std::span<const EventRecord> events) {
  std::map<int, RoundRecord> rounds;
  for (const EventRecord& e : events) {
    if (e.kind() == EventKind::kScoresPublished) continue;
    const int index = e.round();
    auto [it, inserted] = rounds.try_emplace(index);
    RoundRecord& r = it->second;
    if (inserted) {
      r.round = index;
      r.sim_time = e.sim_time;
      r.best_weighted_loss = std::numeric_limits<double>::quiet_NaN();
    }
    std::visit(
        [&r](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TaskCreatedEvent>) {
            ++r.tasks_created;
          } else if constexpr (std::is_same_v<T, SubmissionReceivedEvent>) {
            if (!p.submission.completed) ++r.failed_submissions;
          } else if constexpr (std::is_same_v<T, TaskEvaluatedEvent>) {
            ++r.tasks_evaluated;
            for (const OutcomeRow& o : p.outcomes) {
              if (o.flags.duplicate) ++r.duplicate_flags;
              if (o.flags.suspicious) ++r.suspicious_flags;
              if (o.rank > 0 && (std::isnan(r.best_weighted_loss) ||
                                 o.weighted_loss < r.best_weighted_loss)) {
                r.best_weighted_loss = o.weighted_loss;
              }
            }
          } else if constexpr (std::is_same_v<T, TaskDelayedEvent>) {
            ++r.tasks_delayed;
          } else if constexpr (std::is_same_v<T, TaskDroppedEvent>) {
            ++r.tasks_dropped;
          }
        },
        e.payload);
  }
  std::vector<RoundRecord> out;
  out.reserve(rounds.size());
  for (auto& [index, record] : rounds) out.push_back(record);
  return out;
}

ReportTables BuildReport(std::span<const EventRecord> events) {
  ReportTables tables;
  tables.rounds = FormatRoundsTable(RoundsFromEvents(events));

  tables.scores = "round\tsim_time\tminer\ts_temporal\tx_normalised\ts_final\tw_chain\n";
  std::map<MinerId, MinerTally> tally;
  for (const EventRecord& e : events) {
    if (const auto* pool = std::get_if<PoolSelectedEvent>(&e.payload)) {
      for (MinerId m : pool->miners) ++tally[m].selected;
    } else if (const auto* sub =
                   std::get_if<SubmissionReceivedEvent>(&e.payload)) {
      MinerTally& t = tally[sub->submission.miner_id];
      if (sub->submission.completed) ++t.completed;
    } else if (const auto* eval = std::get_if<TaskEvaluatedEvent>(&e.payload)) {
      for (const OutcomeRow& o : eval->outcomes) {
        MinerTally& t = tally[o.miner_id];
        if (o.rank > 0) ++t.credited;
        if (o.rank == 1) ++t.wins;
        if (o.flags.duplicate) ++t.duplicate;
        if (o.flags.suspicious) ++t.suspicious;
        t.adjusted_total += o.adjusted_score;
      }
    } else if (const auto* scores =
                   std::get_if<ScoresPublishedEvent>(&e.payload)) {
      for (const FinalScoreRow& row : scores->rows) {
        tables.scores += std::to_string(scores->round) + '\t' +
                         FormatDouble(e.sim_time) + '\t' +
                         std::to_string(row.miner_id) + '\t' +
                         FormatDouble(row.s_temporal) + '\t' +
                         FormatDouble(row.x_normalised) + '\t' +
                         FormatDouble(row.s_final) + '\t' +
                         FormatDouble(row.w_chain) + '\n';
      }
    }
  }

  tables.selection =
      "miner\tselected\tcompleted\tcredited\twins\tduplicate_flags\t"
      "suspicious_flags\tadjusted_score_total\n";
  for (const auto& [miner, t] : tally) {
    tables.selection += std::to_string(miner) + '\t' +
                        std::to_string(t.selected) + '\t' +
                        std::to_string(t.completed) + '\t' +
                        std::to_string(t.credited) + '\t' +
                        std::to_string(t.wins) + '\t' +
                        std::to_string(t.duplicate) + '\t' +
                        std::to_string(t.suspicious) + '\t' +
                        FormatDouble(t.adjusted_total) + '\n';
  }
  return tables;
}

}  // namespace gradsim
