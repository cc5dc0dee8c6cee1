// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fiocalc/stationary.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using stationary::cplx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("critical manifold in closed form") {
  const auto p = stationary::make_problem("(x-w)^2/2 + i*x^2*w^2/2", "1", 1, 1);
  for (double w : {0.2, 0.7, -1.1}) {
    const auto cm = stationary::critical_manifold(p, {w});
    CHECK(std::abs(cm.Z[0] - w / cplx(1, w * w)) < 1e-12);
  }
}

TEST_CASE("Fresnel leading terms against quadrature") {
  for (int s : {1, -1}) {
    const auto p = stationary::make_problem(s > 0 ? "x^2/2" : "-x^2/2", "bump(x)", 1);
    const auto e = stationary::leading_term(p, {});
    for (double t : {1e2, 1e3, 1e4}) {
      const cplx closed = std::sqrt(2 * kPi / t) * std::polar(1.0, s * kPi / 4);
      CHECK(std::abs(e.at(t) - closed) < 1e-12 * std::abs(closed));
      const cplx ref = oracles::simpson(
          [&](double x) { return std::exp(cplx(0, s * t * x * x / 2)) * oracles::bump(x * x); }, -1, 1, 400000);
      CHECK(std::abs(ref - closed) / std::abs(closed) <= 10.0 / t);
      CHECK(std::abs(stationary::integral(p, {}, t).value - closed) / std::abs(closed) <= 10.0 / t);
    }
  }
}

TEST_CASE("remainder slopes") {
  const auto g = stationary::make_problem("i*x^2/2", "bump(x)", 1);
  CHECK(stationary::remainder_order(g, {}, stationary::default_t_grid()).fit.slope <= -1.4);
  const auto c = stationary::make_problem("x^2/2 + x^3/6", "bump(x)", 1);
  const double s = stationary::remainder_order(c, {}, stationary::default_t_grid()).fit.slope;
  CHECK(s >= -1.7);
  CHECK(s <= -1.3);
}

TEST_CASE("vanishing amplitude at the critical point") {
  const auto p = stationary::make_problem("x^2/2", "x^2*bump(x)", 1);
  const auto e = stationary::leading_term(p, {});
  CHECK(std::abs(e.at(100.0)) == 0.0);
  std::vector<double> t{100, 316.2, 1000, 3162, 10000};
  std::vector<double> mag;
  for (double s : t) mag.push_back(std::abs(stationary::integral(p, {}, s).value));
  CHECK(oracle::fit_order(t, mag).slope <= -1.4);
}

TEST_CASE("non-critical origin is rejected") {
  CHECK_THROWS_AS(stationary::make_problem("x + x^2/2", "bump(x)", 1), ValidationError);
}
