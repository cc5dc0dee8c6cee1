// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fiocalc/expr.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using expr::cplx;

namespace {
const expr::VarLayout kLayout({{"x", 2, false}, {"theta", 1, true}});
}

TEST_CASE("layout resolves grouped names") {
  CHECK(kLayout.dim() == 3);
  CHECK(kLayout.resolve("x2").value() == 1);
  CHECK(kLayout.resolve("theta1").value() == 2);
  CHECK_FALSE(kLayout.resolve("y1").has_value());
  CHECK(kLayout.is_frequency(2));
  CHECK_FALSE(kLayout.is_frequency(0));
}

TEST_CASE("evaluation matches direct arithmetic") {
  const auto e = expr::parse("x1*theta1 + i*norm(theta)*x1^2/2 - 2^2 + x1^-2", kLayout);
  const cplx x1 = 1.0, th = 3.0;
  const cplx want = x1 * th + cplx(0, 1) * 3.0 * x1 * x1 / 2.0 - 4.0 + 1.0 / (x1 * x1);
  CHECK(std::abs(expr::eval(e, {x1, 2.0, th}) - want) < 1e-15);
  const auto f = expr::parse("exp(x1)*sin(x2) + cos(theta1)/sqrt(x1) + log(x2)", kLayout);
  const cplx z1(0.3, 0.2), z2(1.1, -0.4), z3(0.7, 0.0);
  const cplx g = std::exp(z1) * std::sin(z2) + std::cos(z3) / std::sqrt(z1) + std::log(z2);
  CHECK(std::abs(expr::eval(f, {z1, z2, z3}) - g) < 1e-14);
}

TEST_CASE("printing round trips") {
  for (const char* s : {"x1*theta1 + i*norm(theta)*x1^2/2", "-(x1 - x2)^3/theta1", "bump(x1, x2/2)",
                        "plateau(0.5, x1/3)", "2.5e-3*exp(-x1^2)"}) {
    const auto e = expr::parse(s, kLayout);
    const auto back = expr::parse(expr::print(e), kLayout);
    CHECK(expr::equal(e, back));
    CHECK(std::abs(expr::eval(e, {0.2, 0.4, 1.3}) - expr::eval(back, {0.2, 0.4, 1.3})) < 1e-15);
  }
}

TEST_CASE("bump and plateau cutoffs") {
  const auto b = expr::parse("bump(x1, x2)", kLayout);
  CHECK(std::abs(expr::eval(b, {0.3, 0.4, 0.0}).real() - oracles::bump(0.25)) < 1e-15);
  CHECK(expr::eval(b, {0.8, 0.8, 0.0}) == cplx(0.0));
  CHECK(expr::eval(b, {0.0, 0.0, 0.0}) == cplx(1.0));
  const auto p = expr::parse("plateau(0.5, x1)", kLayout);
  CHECK(expr::eval(p, {0.4, 0.0, 0.0}) == cplx(1.0));
  CHECK(expr::eval(p, {1.2, 0.0, 0.0}) == cplx(0.0));
  const double mid = expr::eval(p, {0.75, 0.0, 0.0}).real();
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}

TEST_CASE("compiled program agrees with the tree walker") {
  const auto e = expr::parse("x1*theta1 + i*norm(theta)*x1^2/2 + bump(x2)", kLayout);
  const expr::Program p(e, 3);
  const std::vector<cplx> z{0.4, 0.1, 2.0};
  CHECK(std::abs(p(z) - expr::eval(e, z)) < 1e-15);
}

TEST_CASE("parse errors carry a position") {
  try {
    expr::parse("x1*(theta1", kLayout);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() >= 1);
    CHECK(e.code() == ErrorCode::kParse);
  }
  CHECK_THROWS_AS(expr::parse("y1 + 1", kLayout), ParseError);
  CHECK_THROWS_AS(expr::parse("frob(x1)", kLayout), ParseError);
  CHECK_THROWS_AS(expr::parse("x1 +* 2", kLayout), ParseError);
}

TEST_CASE("division by zero is a domain error") {
  const auto e = expr::parse("1/x1", kLayout);
  CHECK_THROWS_AS(expr::eval(e, {0.0, 0.0, 0.0}), DomainError);
}
