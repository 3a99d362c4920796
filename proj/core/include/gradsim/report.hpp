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

#ifndef GRADSIM_REPORT_HPP_
#define GRADSIM_REPORT_HPP_

#include <span>
#include <string>
#include <vector>

#include "gradsim/event_log.hpp"
#include "gradsim/scoring.hpp"
#include "gradsim/simulation.hpp"

namespace gradsim {

// Shortest round-trip decimal; "nan" for NaN.
std::string FormatDouble(double value);

// Tab-separated, one header line, one row per round.
std::string FormatRoundsTable(std::span<const RoundRecord> rounds);

// Final-score table with each miner's strategy; rows follow the report.
std::string FormatFinalScoresTable(const FinalScoreReport& report,
                                   std::span<const MinerProfile> miners);

// Rebuilds the per-round records from the log alone. Matches the records
// the simulation kept while it ran.
std::vector<RoundRecord> RoundsFromEvents(std::span<const EventRecord> events);

struct ReportTables {
  std::string rounds;     // per-round best loss and flag counts
  std::string scores;     // every published score row
  std::string selection;  // per-miner selection and credit counts
};

ReportTables BuildReport(std::span<const EventRecord> events);

}  // namespace gradsim

#endif  // GRADSIM_REPORT_HPP_
