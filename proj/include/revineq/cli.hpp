#pragma once

#include <exception>
#include <ostream>
#include <string>

#include <json.hpp>

#include "revineq/config.hpp"

namespace revineq {

enum ExitStatus : int {
  kExitPass = 0,
  kExitMarginFailure = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

/// 2 for configuration / parameter errors, 3 for everything else.
int exit_status_for(const std::exception& e);

struct RunResult {
  int exit_status = kExitPass;
  /// Contents of report.json: command, resolved config, result, exit status.
  nlohmann::ordered_json report;
  /// Runtime and timestamp, kept out of report.json so reports of identical
  /// runs are byte-identical.
  nlohmann::ordered_json metadata;
  std::string sweep_csv;
  std::string trace_csv;
};

/// Runs `config.command` without touching the file system. Errors are
/// captured into the result (report["error"]) with the matching status.
RunResult execute(const RunConfig& config);

/// execute() plus writing report.json, metadata.json and, when produced,
/// sweep.csv / trace.csv into config.out_dir. A one-line summary goes to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace revineq
