// Copyright 2026 The Strategem Authors
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

// strategem solve|run|analyze|report
//
// Exit codes:
//   0  success
//   1  I/O or unexpected failure
//   2  invalid config or game spec
//   3  transport failure, or every trial failed
//   4  run finished with some failed or missing trials
//   5  data error (corrupt log, missing traces or reference, bad support)

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strategem/strategem.h"

namespace {

using strategem::ErrorCode;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kMissingPlaceholder:
    case ErrorCode::kUnknownPlaceholder:
    case ErrorCode::kAsymmetricGame:
      return 2;
    case ErrorCode::kTimeout:
    case ErrorCode::kTransportError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kMalformedEndpointReply:
    case ErrorCode::kAllTrialsFailed:
      return 3;
    case ErrorCode::kCorruptLog:
    case ErrorCode::kMissingTraces:
    case ErrorCode::kMissingReferenceFile:
    case ErrorCode::kMismatchedSupport:
    case ErrorCode::kUnsupportedGame:
    case ErrorCode::kEmptyRun:
    case ErrorCode::kNoClassifiedTrials:
    case ErrorCode::kNoSymmetricEquilibrium:
      return 5;
    default:
      return 1;
  }
}

void Emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) strategem::Fail(ErrorCode::kIoError, "cannot write " + output);
  out << text;
}

std::vector<strategem::LoadedRun> OpenRuns(const std::vector<std::string>& paths) {
  std::vector<strategem::LoadedRun> runs;
  for (const auto& p : paths) runs.push_back(strategem::OpenRun(p));
  return runs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solve strategic games and score agents against their solutions"};
  app.require_subcommand(1);

  std::string config, format = "text", output, kind;
  std::vector<std::string> run_paths, references;
  bool resume = false, quiet = false;
  int max_k = 10;

  auto* solve = app.add_subcommand("solve", "Level-k chains and equilibria of a game file");
  solve->add_option("--config", config, "Game file (YAML)")->required()->check(CLI::ExistingFile);
  solve->add_option("--max-k", max_k, "Highest level in the chains")->check(CLI::NonNegativeNumber);
  solve->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  solve->add_option("--output", output, "Write to a file instead of stdout");

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  run->add_flag("--resume", resume, "Skip trials already in the log");
  run->add_flag("--quiet", quiet, "Do not print the summary");

  auto* analyze = app.add_subcommand("analyze", "Per-condition metrics of one or more runs");
  analyze->add_option("--run", run_paths, "Run log(s)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  analyze->add_option("--output", output, "Write to a file instead of stdout");

  auto* report = app.add_subcommand("report", "Tables over one or more runs");
  report->add_option("--kind", kind, "Table kind")
      ->required()
      ->check(CLI::IsMember({"backtracking", "identity", "distances", "keyword-crosstab", "histogram"}));
  report->add_option("--run", run_paths, "Run log(s)")->required()->check(CLI::ExistingFile);
  report->add_option("--reference", references,
                     "Reference for distances: nash, or [label=]path to an action,mass CSV");
  report->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  report->add_option("--output", output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    auto fmt = strategem::ParseOutputFormat(format);
    if (*solve) {
      auto spec = strategem::LoadGameFile(config);
      Emit(strategem::SolveReport(spec, max_k, fmt), output);
      return 0;
    }
    if (*run) {
      auto cfg = strategem::LoadConfig(config);
      strategem::RunOptions opts;
      opts.resume = resume;
      auto summary = strategem::RunExperiment(cfg, opts);
      if (!quiet) std::cout << strategem::SummaryToJson(summary).dump(2) << "\n";
      std::cerr << "log: " << cfg.output << "\nsummary: " << strategem::SummaryPath(cfg.output)
                << "\n";
      return summary.status == "ok" ? 0 : 4;
    }
    if (*analyze) {
      Emit(strategem::Render(strategem::MetricsTable(OpenRuns(run_paths)), fmt), output);
      return 0;
    }
    if (*report) {
      auto runs = OpenRuns(run_paths);
      strategem::Table table;
      if (kind == "backtracking") {
        table = strategem::BacktrackingTable(runs);
      } else if (kind == "identity") {
        table = strategem::IdentityTable(runs);
      } else if (kind == "distances") {
        if (references.empty()) {
          strategem::Fail(ErrorCode::kConfigError, "distances needs --reference");
        }
        std::vector<strategem::ReferenceSource> refs;
        for (const auto& r : references) refs.push_back(strategem::ReferenceSource::Parse(r));
        table = strategem::DistanceTable(runs, refs);
      } else {
        if (runs.size() != 1) strategem::Fail(ErrorCode::kConfigError, kind + " takes one --run");
        table = kind == "histogram" ? strategem::Histogram(runs[0])
                                    : strategem::KeywordCrosstab(runs[0]);
      }
      Emit(strategem::Render(table, fmt), output);
      return 0;
    }
  } catch (const strategem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
