// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "doctest.h"
#include "fiocalc/report.hpp"

using namespace fiocalc;

TEST_CASE("FNV-1a reference values") {
  CHECK(report::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(report::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(report::hash_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("floats use 17 significant digits") {
  report::Json j;
  j["x"] = 0.1;
  j["n"] = 3;
  j["z"] = report::to_json(report::cplx(1.5, -2.0));
  j["bad"] = std::numeric_limits<double>::quiet_NaN();
  const auto s = report::render(j);
  CHECK(s.find("1.0000000000000001e-01") != std::string::npos);
  CHECK(s.find("\"n\": 3") != std::string::npos);
  CHECK(s.find("-2.0000000000000000e+00") != std::string::npos);
  CHECK(s.find("\"bad\": null") != std::string::npos);
  CHECK(s.back() == '\n');
  CHECK(report::render(j) == s);
}

TEST_CASE("envelope") {
  const auto e = report::envelope("analyze", "[phase]\n", 7);
  CHECK(e["schema_version"] == report::kSchemaVersion);
  CHECK(e["command"] == "analyze");
  CHECK(e["seed"] == 7);
  CHECK(e["config_hash"] == "fnv1a64:" + report::hash_hex("[phase]\n"));
  CHECK(e["version"] == report::toolkit_version());
}

TEST_CASE("error objects") {
  const auto j = report::error_json(ParseError("unexpected token", 2, 5));
  CHECK(j["code"] == 3);
  CHECK(j["name"] == "parse");
  CHECK(j["line"] == 2);
  CHECK(j["column"] == 5);
}
