// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fiocalc/oracle.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using oracle::cplx;

namespace {
const expr::VarLayout kLayout({{"x", 2, false}});
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 5, 20, 64}) {
    const auto& r = oracle::gauss_legendre(n);
    double sum = 0.0, second = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += r.weights[static_cast<size_t>(k)];
      second += r.weights[static_cast<size_t>(k)] * r.nodes[static_cast<size_t>(k)] * r.nodes[static_cast<size_t>(k)];
    }
    CHECK(std::abs(sum - 2.0) < 1e-14);
    if (n >= 2) CHECK(std::abs(second - 2.0 / 3.0) < 1e-14);
  }
}

TEST_CASE("tensor integration of smooth functions") {
  const auto e = expr::parse("x1^4*x2^2 + exp(x1)", kLayout);
  const auto r = oracle::integrate(e, {0, 1}, {{0, 1}, {-1, 2}}, {0.0, 0.0}, {20, 20});
  const double want = (1.0 / 5.0) * 3.0 + (std::exp(1.0) - 1.0) * 3.0;
  CHECK(std::abs(r.value - want) < 1e-12);
}

TEST_CASE("damped Gaussian integral") {
  const auto F = expr::parse("i*x1^2/2", kLayout);
  const auto u = expr::parse("plateau(0.5, x1/3)", kLayout);
  const double t = 100.0;
  const auto r = oracle::osc_integral(F, u, {0}, {{-3, 3}}, t, {0.0, 0.0});
  CHECK(std::abs(r.value - std::sqrt(2 * kPi / t)) / std::sqrt(2 * kPi / t) < 1e-10);
}

TEST_CASE("Fresnel integral to leading order") {
  const auto F = expr::parse("x1^2/2", kLayout);
  const auto u = expr::parse("bump(x1)", kLayout);
  const double t = 100.0;
  const auto r = oracle::osc_integral(F, u, {0}, {{-1, 1}}, t, {0.0, 0.0});
  const cplx lead = std::sqrt(2 * kPi / t) * std::polar(1.0, kPi / 4);
  CHECK(std::abs(r.value - lead) / std::abs(lead) < 5e-2);
  // Independent Simpson reference of the same integral.
  const cplx ref = oracles::simpson(
      [&](double x) { return std::exp(cplx(0, t * x * x / 2)) * oracles::bump(x * x); }, -1, 1, 200000);
  CHECK(std::abs(r.value - ref) / std::abs(ref) < 1e-9);
}

TEST_CASE("order fit of an exact power law") {
  const std::vector<double> t{10, 20, 40, 80};
  std::vector<double> e;
  for (double s : t) e.push_back(3.0 * std::pow(s, -1.5));
  const auto fit = oracle::fit_order(t, e);
  CHECK(std::abs(fit.slope + 1.5) < 1e-12);
  CHECK(std::abs(fit.intercept - std::log(3.0)) < 1e-12);
}

TEST_CASE("point budget is enforced") {
  const auto F = expr::parse("x1^2/2", kLayout);
  const auto u = expr::parse("bump(x1)", kLayout);
  oracle::QuadOptions q;
  q.max_points = 100;
  CHECK_THROWS_AS(oracle::osc_integral(F, u, {0}, {{-1, 1}}, 1e4, {0.0, 0.0}, q), QuadratureError);
}

TEST_CASE("oscillation resolution with the default budget") {
  const auto F = expr::parse("x1", kLayout);
  const auto u = expr::parse("1", kLayout);
  const double t = 1e3;
  const auto r = oracle::osc_integral(F, u, {0}, {{0, 1}}, t, {0.0, 0.0});
  const cplx want = (std::exp(cplx(0, t)) - 1.0) / cplx(0, t);
  CHECK(std::abs(r.value - want) <= 1e-12 * std::abs(want));
}
