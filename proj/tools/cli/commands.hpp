#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace wekac::cli {

struct Rendered {
  std::string text;    // the report, or the data file for plot output
  std::string script;  // gnuplot script for plot output, else empty
};

/// Runs one subcommand and renders its report in cfg.format.
Rendered run(const RunConfig& cfg);

struct CliResult {
  int exit_code = 0;
  std::string out;  // report text when no output path is given
  std::string err;
};

/// Full front door: parses arguments (without the program name), merges the
/// config file, runs, and writes files. Exit codes: 0 ok, 2 domain errors,
/// 3 capacity errors.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace wekac::cli
