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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "gradsim/config.hpp"
#include "gradsim/event_log.hpp"
#include "gradsim/report.hpp"
#include "gradsim/scoring.hpp"
#include "gradsim/simulation.hpp"

namespace gradsim::cli {
namespace {

namespace fs = std::filesystem;

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

int Run(const fs::path& config_path, std::optional<std::uint64_t> seed_override,
        const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    SimConfig config = LoadSimConfig(config_path);
    if (seed_override) config.seed = *seed_override;

    const SimResult result = RunSimulation(config);
    const SimSummary& summary = result.summary;

    std::ostringstream events;
    result.events.Write(events);

    fs::create_directories(out_dir);
    WriteFile(out_dir / kEventsFile, events.str());
    WriteFile(out_dir / kSummaryFile, FormatRoundsTable(summary.rounds));
    WriteFile(out_dir / kFinalScoresFile,
              FormatFinalScoresTable(summary.final_scores, summary.miners));

    int duplicates = 0;
    int suspicious = 0;
    for (const RoundRecord& r : summary.rounds) {
      duplicates += r.duplicate_flags;
      suspicious += r.suspicious_flags;
    }
    const FinalScoreRow* top = nullptr;
    for (const FinalScoreRow& row : summary.final_scores.rows) {
      if (top == nullptr || row.s_final > top->s_final) top = &row;
    }

    out << "seed              " << config.seed << '\n'
        << "rounds            " << summary.rounds.size() << '\n'
        << "tasks created     " << summary.tasks_created << '\n'
        << "tasks evaluated   " << summary.tasks_evaluated << '\n'
        << "tasks dropped     " << summary.tasks_dropped << '\n'
        << "duplicate flags   " << duplicates << '\n'
        << "suspicious flags  " << suspicious << '\n';
    if (!summary.rounds.empty()) {
      out << "final best loss   "
          << FormatDouble(summary.rounds.back().best_weighted_loss) << '\n';
    }
    if (top != nullptr) {
      out << "top miner         " << top->miner_id << " ("
          << ToString(summary.miners[top->miner_id].strategy.kind)
          << ", s_final " << FormatDouble(top->s_final) << ")\n";
    }
    out << "outputs           " << out_dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "run: " << e.what() << '\n';
    return 1;
  }
}

int Report(const fs::path& events_path, const fs::path& out_dir,
           std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(events_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + events_path.string() + "'");
    const std::vector<EventRecord> events = ReadEventLog(in);
    const ReportTables tables = BuildReport(events);

    fs::create_directories(out_dir);
    WriteFile(out_dir / kRoundsTable, tables.rounds);
    WriteFile(out_dir / kScoresTable, tables.scores);
    WriteFile(out_dir / kSelectionTable, tables.selection);
    out << "read " << events.size() << " events; wrote " << kRoundsTable << ", "
        << kScoresTable << ", " << kSelectionTable << " to " << out_dir.string()
        << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "report: " << e.what() << '\n';
    return 1;
  }
}

int ScoreCheck(double x, std::ostream& out, std::ostream& err) {
  try {
    const ProtocolParams params;
    const double s_final = FinalScore(x, params);
    const double logistic =
        1.0 / (1.0 + std::exp(-params.gamma_steepness * (x - params.mu_shift)));
    const double s_sigmoid = SigmoidScore(x, params);
    out << std::setprecision(12)
        << "x          " << x << '\n'
        << "logistic   " << logistic << '\n'
        << "S_sigmoid  " << s_sigmoid << '\n'
        << "S_final    " << s_final << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "score-check: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gradsim::cli
