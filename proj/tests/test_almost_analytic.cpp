// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fiocalc/almost_analytic.hpp"

using namespace fiocalc;
using aa::cplx;

namespace {
const expr::VarLayout kLayout({{"x", 1, false}});
expr::Expr f(const char* s) { return expr::parse(s, kLayout); }
}  // namespace

TEST_CASE("polynomials extend exactly") {
  const cplx z(0.7, 0.3);
  CHECK(std::abs(aa::value(aa::extend(f("x1"), 3), {z}) - z) < 1e-15);
  CHECK(std::abs(aa::value(aa::extend(f("x1^2"), 2), {z}) - z * z) < 1e-15);
  CHECK(aa::dbar_order(aa::extend(f("x1^3 - 2*x1"), 4), {0.3}, {{1.0}}).exact);
}

TEST_CASE("exp extension against the analytic continuation") {
  const cplx v = aa::value(aa::extend(f("exp(x1)"), 8), {cplx(0, 0.1)});
  CHECK(std::abs(v - std::exp(cplx(0, 0.1))) <= 1e-9);
}

TEST_CASE("dbar vanishes to the extension order") {
  CHECK(aa::dbar_order(aa::extend(f("exp(x1)"), 4), {0.3}, {{1.0}}).slope >= 3.9);
  CHECK(aa::dbar_order(aa::extend(f("sin(x1)"), 6), {0.3}, {{1.0}}).slope >= 5.9);
  CHECK(aa::dbar_order(aa::extend(f("exp(x1)*cos(x1)"), 8), {-0.2}, {{1.0}}).slope >= 7.9);
}

TEST_CASE("dbar matches a finite difference of the extension") {
  const auto ext = aa::extend(f("exp(x1)"), 4);
  const cplx z(0.3, 0.05);
  const double h = 1e-5;
  const cplx dx = (aa::value(ext, {z + h}) - aa::value(ext, {z - h})) / (2 * h);
  const cplx dy = (aa::value(ext, {z + cplx(0, h)}) - aa::value(ext, {z - cplx(0, h)})) / (2 * h);
  const cplx want = 0.5 * (dx + cplx(0, 1) * dy);
  CHECK(std::abs(aa::dbar(ext, {z})[0] - want) < 1e-8);
}

TEST_CASE("extension is linear") {
  const cplx z(0.2, 0.15);
  const auto a = aa::value(aa::extend(f("exp(x1)"), 6), {z});
  const auto b = aa::value(aa::extend(f("sin(x1)"), 6), {z});
  const auto c = aa::value(aa::extend(f("2*exp(x1) - 3*sin(x1)"), 6), {z});
  CHECK(std::abs(c - (2.0 * a - 3.0 * b)) < 1e-14);
}

TEST_CASE("manifold equivalence") {
  const expr::VarLayout layout({{"x", 1, false}});
  aa::GraphManifold m1{1, {expr::parse("x1 + i*x1^2", layout)}, 6};
  aa::GraphManifold m2{1, {expr::parse("x1", layout)}, 6};
  const std::vector<std::vector<double>> base{{0.3}, {-0.4}};
  const std::vector<std::vector<double>> dirs{{1.0}};
  CHECK(aa::manifolds_equivalent(m1, m1, base, dirs).equivalent);
  CHECK_FALSE(aa::manifolds_equivalent(m1, m2, base, dirs).equivalent);
  aa::GraphManifold e4{1, {expr::parse("i*exp(i*x1)", layout)}, 4};
  aa::GraphManifold e8{1, {expr::parse("i*exp(i*x1)", layout)}, 8};
  CHECK(aa::manifolds_equivalent(e4, e8, base, dirs).equivalent);
  CHECK(aa::manifolds_equivalent(e8, e4, base, dirs).equivalent);
}
