// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "fiocalc/commands.hpp"

using namespace fiocalc;
using commands::run_text;

namespace {
const char* kNonDegenerate =
    "[phase]\nexpr = x1*theta1 + i*norm(theta)*x1^2/2\nn = 1\nN = 1\nx_seed = 0.3\n";
const char* kDummy = "[phase]\nexpr = x1*theta1\nn = 1\nN = 2\ndirection = 1, 0.5\ntheta_seed = 1, 0.5\n";
}  // namespace

TEST_CASE("analyze reports the kind and excess") {
  const auto a = run_text("analyze", kNonDegenerate);
  CHECK(a.exit_code == 0);
  CHECK(a.json["kind"] == "non-degenerate");
  CHECK(a.json["excess"] == 0);
  const auto b = run_text("analyze", kDummy);
  CHECK(b.exit_code == 0);
  CHECK(b.json["kind"] == "clean");
  CHECK(b.json["excess"] == 1);
}

TEST_CASE("exit codes") {
  const auto parse = run_text("analyze", "[phase]\nexpr = x1*(theta1\nn = 1\nN = 1\n");
  CHECK(parse.exit_code == 1);
  CHECK(parse.json["error"]["name"] == "parse");
  CHECK(parse.json["error"].contains("column"));
  CHECK(run_text("compose", kNonDegenerate).exit_code == 1);
  CHECK(run_text("frobnicate", kNonDegenerate).exit_code == 1);
  CHECK(run_text("analyze", "[phase]\nwat = 1\n").exit_code == 1);
  const auto bad = run_text("analyze", "[phase]\nexpr = x1*theta1 - i*norm(theta)*x1^2\nn = 1\nN = 1\nx_seed = 0.1\n");
  CHECK(bad.exit_code == 2);
  CHECK(bad.json["status"] == "fail");
}

TEST_CASE("stationary-phase on the Gaussian") {
  const auto r = run_text("stationary-phase", "[stationary]\nF = i*x^2/2\nu = bump(x)\nn = 1\n");
  CHECK(r.exit_code == 0);
  const double slope = r.json["remainder_fit"]["slope"];
  CHECK(slope >= -1.65);
  CHECK(slope <= -1.35);
}

TEST_CASE("identity composition cross-check") {
  const auto r = run_text("compose",
                          "[compose]\nphase1 = (x1-y1)*theta1\namplitude1 = 1\nphase2 = (y1-z1)*sigma1\n"
                          "amplitude2 = 1\nseed = 0, 0, 0, 1, 1\n");
  CHECK(r.exit_code == 0);
  CHECK(r.json["excess"] == 0);
  CHECK(r.json["status"] == "pass");
}

TEST_CASE("validate is deterministic and prefixes checks") {
  const std::string cfg = std::string(kNonDegenerate) + "[amplitude]\nexpr = 1\n[psi]\nlambda = 0.5, 2\n";
  const auto a = run_text("validate", cfg);
  const auto b = run_text("validate", cfg);
  CHECK(a.exit_code == 0);
  CHECK(report::render(a.json) == report::render(b.json));
  CHECK(a.json["checks"][0]["name"].get<std::string>().rfind("analyze.", 0) == 0);
  CHECK(a.json["runs"].contains("symbol"));
}

TEST_CASE("seed changes the envelope only through sampling") {
  commands::RunOptions opt;
  opt.seed = 9;
  const auto r = run_text("analyze", kNonDegenerate, opt);
  CHECK(r.json["seed"] == 9);
  CHECK(r.exit_code == 0);
}
