// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "fiocalc/config.hpp"
#include "fiocalc/error.hpp"

using namespace fiocalc;
using config::Config;

TEST_CASE("sections, keys, comments and lists") {
  const auto c = Config::parse(
      "# comment\n[phase]\nexpr = x1*theta1  ; trailing\nn = 1\nx_lo = -1, -2.5\n\n[psi]\nlambda = 0.5\n");
  CHECK(c.has("phase"));
  CHECK(c.has("psi", "lambda"));
  CHECK_FALSE(c.has("compose"));
  CHECK(c.str("phase", "expr") == "x1*theta1");
  CHECK(c.integer("phase", "n") == 1);
  CHECK(c.list("phase", "x_lo") == std::vector<double>{-1.0, -2.5});
  CHECK(c.num("psi", "lambda") == 0.5);
  CHECK(c.num("psi", "missing_is_fine_with_default", 3.0) == 3.0);
}

TEST_CASE("schema violations are config errors") {
  CHECK_THROWS_AS(Config::parse("[nope]\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[phase]\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[phase]\nn = 1\nn = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[phase]\n[phase]\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("n = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[phase\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[phase]\nexpr\n"), ConfigError);
}

TEST_CASE("typed access errors") {
  const auto c = Config::parse("[phase]\nn = 1.5\nangle = abc\n");
  CHECK_THROWS_AS(c.integer("phase", "n"), ConfigError);
  CHECK_THROWS_AS(c.num("phase", "angle"), ConfigError);
  CHECK_THROWS_AS(c.str("phase", "expr"), ConfigError);
  CHECK_THROWS_AS(c.require("compose"), ConfigError);
}
