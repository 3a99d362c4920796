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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gradsim: competitive fine-tuning marketplace simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("--config", config_path, "Key-value config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", run_out, "Output directory")->required();

  std::string events_path;
  std::string report_out;
  auto* report =
      app.add_subcommand("report", "Derive summary tables from an event log");
  report->add_option("--events", events_path, "events.log path")->required();
  report->add_option("--out", report_out, "Output directory")->required();

  double x = 0.0;
  auto* check = app.add_subcommand("score-check",
                                   "Print the final-score transform of x");
  check->add_option("x", x, "Normalised quality in [0, 1]")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return gradsim::cli::Run(config_path, seed, run_out, std::cout, std::cerr);
  }
  if (report->parsed()) {
    return gradsim::cli::Report(events_path, report_out, std::cout, std::cerr);
  }
  return gradsim::cli::ScoreCheck(x, std::cout, std::cerr);
}
