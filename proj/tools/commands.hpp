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

#ifndef GRADSIM_TOOLS_COMMANDS_HPP_
#define GRADSIM_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace gradsim::cli {

inline constexpr const char* kEventsFile = "events.log";
inline constexpr const char* kSummaryFile = "summary.tsv";
inline constexpr const char* kFinalScoresFile = "final_scores.tsv";
inline constexpr const char* kRoundsTable = "rounds.tsv";
inline constexpr const char* kScoresTable = "scores.tsv";
inline constexpr const char* kSelectionTable = "selection.tsv";

// Each command returns a process exit status and never throws.

// Runs a simulation and writes events.log, summary.tsv and final_scores.tsv
// into out_dir. Nothing is written unless the config loads and the run
// completes.
int Run(const std::filesystem::path& config_path,
        std::optional<std::uint64_t> seed_override,
        const std::filesystem::path& out_dir, std::ostream& out,
        std::ostream& err);

// Derives rounds.tsv, scores.tsv and selection.tsv from an event log.
int Report(const std::filesystem::path& events_path,
           const std::filesystem::path& out_dir, std::ostream& out,
           std::ostream& err);

// Prints the final-score transform of x step by step.
int ScoreCheck(double x, std::ostream& out, std::ostream& err);

}  // namespace gradsim::cli

#endif  // GRADSIM_TOOLS_COMMANDS_HPP_
