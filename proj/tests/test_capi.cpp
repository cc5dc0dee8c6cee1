// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <cstring>
#include <string>

#include "doctest.h"
#include "fiocalc/fiocalc.h"

namespace {
struct Session {
  fiocalc_session* s = nullptr;
  Session() { REQUIRE(fiocalc_session_create(&s) == FIOCALC_OK); }
  ~Session() { fiocalc_session_destroy(s); }
};
}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(fiocalc_version()) == "0.1.0");
  CHECK(std::string(fiocalc_status_name(FIOCALC_OK)) == "ok");
  CHECK(std::string(fiocalc_status_name(FIOCALC_E_PARSE)) == "parse");
  CHECK(std::string(fiocalc_status_name(42)) == "unknown");
}

TEST_CASE("expression evaluation and printing") {
  Session s;
  const double re[3] = {1.0, 2.0, 3.0};
  const double im[3] = {0.0, 0.0, 0.0};
  double out_re = 0, out_im = 0;
  REQUIRE(fiocalc_expr_eval(s.s, "x1*theta1 + i*x2", "x:2,theta:1*", re, im, 3, &out_re, &out_im) == FIOCALC_OK);
  CHECK(out_re == 3.0);
  CHECK(out_im == 2.0);
  CHECK(fiocalc_expr_eval(s.s, "x1*(", "x:2,theta:1*", re, im, 3, &out_re, &out_im) == FIOCALC_E_PARSE);
  CHECK(std::strlen(fiocalc_last_error(s.s)) > 0);
  CHECK(fiocalc_expr_eval(s.s, "x1", "x:2", re, im, 3, &out_re, &out_im) == FIOCALC_E_USAGE);
  const char* printed = nullptr;
  REQUIRE(fiocalc_expr_print(s.s, "x1+x2", "x:2", &printed) == FIOCALC_OK);
  CHECK(std::string(printed) == "(x1+x2)");
}

TEST_CASE("branched inverse square root") {
  Session s;
  const double h[1] = {1.0};
  double re = 0, im = 0;
  REQUIRE(fiocalc_inv_sqrt_det(s.s, h, nullptr, 1, &re, &im) == FIOCALC_OK);
  CHECK(std::abs(std::complex<double>(re, im) - std::polar(1.0, std::atan(1.0))) < 1e-12);
  const double z[1] = {0.0};
  CHECK(fiocalc_inv_sqrt_det(s.s, z, nullptr, 1, &re, &im) == FIOCALC_E_BRANCH);
}

TEST_CASE("running a command") {
  Session s;
  REQUIRE(fiocalc_set_seed(s.s, 3) == FIOCALC_OK);
  REQUIRE(fiocalc_set_threads(s.s, 1) == FIOCALC_OK);
  const char* report = nullptr;
  int code = -1;
  REQUIRE(fiocalc_run(s.s, "analyze", "[phase]\nexpr = x1*theta1\nn = 1\nN = 1\nx_seed = 0.2\n", &report, &code) ==
          FIOCALC_OK);
  CHECK(code == 0);
  CHECK(std::string(report).find("\"kind\": \"non-degenerate\"") != std::string::npos);
  CHECK(std::string(report).find("\"seed\": 3") != std::string::npos);
  REQUIRE(fiocalc_run(s.s, "compose", "[phase]\n", &report, &code) == FIOCALC_OK);
  CHECK(code == 1);
  CHECK(fiocalc_run(nullptr, "analyze", "", &report, &code) == FIOCALC_E_USAGE);
  CHECK(fiocalc_composed_order(0, 0, 1) == 0.5);
}
