// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subcommands: analyze, stationary-phase, symbol, compose, oracle, validate.
// Each one reads a Config and produces a JSON report with named checks.

#ifndef FIOCALC_COMMANDS_HPP
#define FIOCALC_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fiocalc/config.hpp"
#include "fiocalc/report.hpp"

namespace fiocalc::commands {

struct RunOptions {
  std::uint64_t seed = 1;  // sample-point generation
};

struct Outcome {
  report::Json json;
  int exit_code = 0;  // 0 pass, 1 usage/config/parse, 2 failed check, else error code
};

const std::vector<std::string>& command_names();

// Never throws for module errors: they are reported in the JSON.
Outcome run(const std::string& command, const config::Config& cfg, const RunOptions& opt = {});

// Parses `text` first; config errors become an error report with exit code 1.
Outcome run_text(const std::string& command, const std::string& text, const RunOptions& opt = {});

int exit_code_for(ErrorCode code);

}  // namespace fiocalc::commands

#endif  // FIOCALC_COMMANDS_HPP
