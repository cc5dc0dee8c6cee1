// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// fiocalc command line tool. Reads a config, writes a JSON report.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fiocalc/fiocalc.h"

namespace {

struct Session {
  fiocalc_session* s = nullptr;
  Session() {
    if (fiocalc_session_create(&s) != FIOCALC_OK) s = nullptr;
  }
  ~Session() { fiocalc_session_destroy(s); }
};

int run(const std::string& command, const std::string& config, const std::string& out, int threads,
        std::uint64_t seed) {
  std::ifstream in(config, std::ios::binary);
  if (!in) {
    std::cerr << "fiocalc: cannot open config file: " << config << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  Session session;
  if (session.s == nullptr) {
    std::cerr << "fiocalc: cannot create session\n";
    return FIOCALC_E_INTERNAL;
  }
  fiocalc_set_threads(session.s, threads);
  fiocalc_set_seed(session.s, seed);
  const char* report = nullptr;
  int exit_code = 0;
  const int st = fiocalc_run(session.s, command.c_str(), text.str().c_str(), &report, &exit_code);
  if (st != FIOCALC_OK) {
    std::cerr << "fiocalc: " << fiocalc_status_name(st) << ": " << fiocalc_last_error(session.s) << "\n";
    return st;
  }
  if (out.empty() || out == "-") {
    std::fputs(report, stdout);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "fiocalc: cannot write " << out << "\n";
      return 1;
    }
    f << report;
  }
  if (exit_code != 0 && *fiocalc_last_error(session.s) != '\0') {
    std::cerr << "fiocalc: " << fiocalc_last_error(session.s) << "\n";
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiocalc: Fourier integral operators with complex phase"};
  app.set_version_flag("--version", std::string(fiocalc_version()));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int threads = 0;
  std::uint64_t seed = 1;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"analyze", "validate a phase function and classify it"},
      {"stationary-phase", "leading term and remainder order of an oscillatory integral"},
      {"symbol", "principal symbol, transition identity and pairing check"},
      {"compose", "composed phase, excess, order and symbol of two kernels"},
      {"oracle", "brute force quadrature of an oscillatory integral"},
      {"validate", "run every check that applies to a config"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config, "problem config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "report file (default stdout)");
    sub->add_option("--threads", threads, "worker threads (default FIOCALC_THREADS, then 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for sample point generation");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return run(app.get_subcommands().front()->get_name(), config, out, threads, seed);
}
