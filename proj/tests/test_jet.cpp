// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fiocalc/jet.hpp"

using namespace fiocalc;
using jets::cplx;

namespace {
const expr::VarLayout kLayout({{"x", 2, false}, {"theta", 1, true}});

// Central differences of the library's plain evaluator.
cplx fd_second(const expr::Expr& e, std::vector<cplx> z, int i, int j, double h = 1e-4) {
  auto f = [&](double a, double b) {
    auto w = z;
    w[static_cast<size_t>(i)] += a;
    w[static_cast<size_t>(j)] += b;
    return expr::eval(e, w);
  };
  return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
}
}  // namespace

TEST_CASE("Taylor coefficients of exp are 1/k!") {
  const auto j = jets::jet_of(expr::parse("exp(x1)", kLayout), {0.0, 0.0, 0.0}, {0}, 6);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(std::abs(j.coeff({k}) - 1.0 / fact) < 1e-15);
  }
}

TEST_CASE("mixed coefficients of a polynomial") {
  // (1 + x1 + 2 x2)^3 around 0: multinomial coefficients times powers of 2.
  const auto j = jets::jet_of(expr::parse("(1 + x1 + 2*x2)^3", kLayout), {0.0, 0.0, 0.0}, {0, 1}, 3);
  CHECK(std::abs(j.coeff({1, 1}) - 12.0) < 1e-13);
  CHECK(std::abs(j.coeff({0, 2}) - 12.0) < 1e-13);
  CHECK(std::abs(j.coeff({2, 1}) - 6.0) < 1e-13);
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  const auto e = expr::parse("x1*theta1 + i*norm(theta)*x1^2/2 + sin(x1*x2)*exp(x2)", kLayout);
  const std::vector<cplx> z{0.3, -0.2, 1.4};
  const auto H = jets::hessian(e, z, {0, 1, 2});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(H(i, k) - fd_second(e, z, i, k)) < 1e-6);
  const auto g = jets::gradient(e, z, {0});
  const double h = 1e-6;
  auto zp = z, zm = z;
  zp[0] += h;
  zm[0] -= h;
  CHECK(std::abs(g[0] - (expr::eval(e, zp) - expr::eval(e, zm)) / (2 * h)) < 1e-8);
}

TEST_CASE("jet arithmetic identities") {
  const auto shape = jets::make_shape({{1, 5}});
  const auto x = jets::Jet::linear(shape, 0.4, {1.0});
  const auto s = jets::sin(x);
  const auto c = jets::cos(x);
  const auto one = s * s + c * c;
  CHECK(std::abs(one[0] - 1.0) < 1e-15);
  for (int k = 1; k < one.size(); ++k) CHECK(std::abs(one[k]) < 1e-14);
  const auto q = jets::checked_div(jets::exp(x), jets::exp(x));
  CHECK(std::abs(q[0] - 1.0) < 1e-15);
  for (int k = 1; k < q.size(); ++k) CHECK(std::abs(q[k]) < 1e-14);
}
