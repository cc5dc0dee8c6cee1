// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <numbers>

#include "doctest.h"
#include "fiocalc/compose.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using compose::cplx;

namespace {

std::string inv() {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", 1.0 / (2 * std::numbers::pi));
  return buf;
}

struct Pair {
  compose::OperatorKernel k1, k2;
  std::vector<double> seed;
};

Pair psido(const std::string& a1 = inv(), const std::string& a2 = inv()) {
  return {compose::make_kernel(1, "(x1-y1)*theta1", a1, 0, 1, 1, 1),
          compose::make_kernel(2, "(y1-z1)*sigma1", a2, 0, 1, 1, 1), {0, 0, 0, 1, 1}};
}

Pair pushpull(const std::string& chi = "bump(y2)") {
  return {compose::make_kernel(1, "(x1-y1)*theta1", inv() + "*" + chi, 0, 1, 2, 1),
          compose::make_kernel(2, "(y1-z1)*sigma1", inv(), 0, 2, 1, 1), {0, 0, 0, 0, 1, 1}};
}

Pair dummy() {
  return {compose::make_kernel(1, "(x1-y1)*theta1", inv(), 0, 1, 1, 1),
          compose::make_kernel(2, "(y1-z1)*sigma1", inv() + "*bump(sigma2/norm(sigma1))", 0, 1, 1, 2),
          {0, 0, 0, 1, 1, 0}};
}

int excess_of(const Pair& p) {
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  return compose::intersection_excess(plan, p.seed, 10).excess;
}

}  // namespace

TEST_CASE("composed order arithmetic") {
  CHECK(compose::composed_order(0, 0, 1) == doctest::Approx(0.5));
  CHECK(compose::composed_order(-0.5, 0.25, 2) == doctest::Approx(0.75));
  CHECK(compose::composed_order(1, 2, 0) == doctest::Approx(3.0));
}

TEST_CASE("kernel orders") {
  const auto p = pushpull();
  CHECK(p.k1.order == doctest::Approx(-0.25));
  CHECK(p.k2.order == doctest::Approx(-0.25));
  CHECK(psido().k1.order == doctest::Approx(0.0));
  CHECK(dummy().k2.order == doctest::Approx(0.5));
}

TEST_CASE("excess of the corpus pairs") {
  CHECK(excess_of(psido()) == 0);
  CHECK(excess_of(pushpull()) == 1);
  CHECK(excess_of(dummy()) == 1);
}

TEST_CASE("excess does not depend on relabeling the y variables") {
  const Pair swapped{compose::make_kernel(1, "(x1-y2)*theta1", inv() + "*bump(y1)", 0, 1, 2, 1),
                     compose::make_kernel(2, "(y2-z1)*sigma1", inv(), 0, 2, 1, 1),
                     {0, 0, 0, 0, 1, 1}};
  CHECK(excess_of(swapped) == 1);
}

TEST_CASE("composed phase is homogeneous and positive") {
  const auto p = pushpull();
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  CHECK(plan.euler_residual < 1e-10);
  CHECK(plan.min_im_Phi >= -1e-12);
  const std::vector<cplx> q{0.1, 0.2, 0.3, 0.4, 1.2, 0.9};
  const auto back = plan.from_omega(plan.to_omega(q));
  for (size_t k = 0; k < q.size(); ++k) CHECK(std::abs(back[k] - q[k]) < 1e-14);
}

TEST_CASE("transverse and fiber paths agree when e = 0") {
  const auto p = psido();
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  const auto ex = compose::intersection_excess(plan, p.seed, 10);
  const auto a = compose::composed_symbol_transverse(plan, ex);
  const auto b = compose::composed_symbol_clean(plan, ex, {});
  CHECK(std::abs(a.value.value - b.value.value) <= 1e-10 * std::abs(a.value.value));
  CHECK(a.composed_order == doctest::Approx(0.0));
  // Direct principal symbol of (Phi, b) as a single Lagrangian distribution.
  const auto psi = symbol::make_psi(plan.Phi_omega, ex.base, 1.0);
  const auto direct = symbol::principal_symbol(plan.Phi_omega, plan.b, ex.cls, ex.base, psi);
  CHECK(std::abs(a.value.value - direct.value) <= 1e-8 * std::abs(direct.value));
}

TEST_CASE("zero amplitude composes to zero") {
  const auto p = psido("0");
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  const auto ex = compose::intersection_excess(plan, p.seed, 10);
  CHECK(compose::composed_symbol_transverse(plan, ex).value.value == cplx(0.0));
}

TEST_CASE("fiber integral scales with the integral of the cutoff") {
  cplx v[2];
  const char* chi[2] = {"bump(y2/2)", "bump(y2)"};
  for (int k = 0; k < 2; ++k) {
    const auto p = pushpull(chi[k]);
    const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
    const auto ex = compose::intersection_excess(plan, p.seed, 10);
    const auto s = compose::composed_symbol_clean(plan, ex, compose::fiber_box_to_omega(plan, ex, {{-2.5, 2.5}}));
    v[k] = s.value.value;
    // m1 = m2 = -1/4 and e = 1.
    CHECK(s.composed_order == doctest::Approx(0.0));
  }
  CHECK(std::abs(v[0] / v[1] - 2.0) <= 2e-6);
}

TEST_CASE("e > 0 needs a fiber box") {
  const auto p = pushpull();
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  const auto ex = compose::intersection_excess(plan, p.seed, 10);
  CHECK_THROWS_AS(compose::composed_symbol_transverse(plan, ex), ValidationError);
  CHECK_THROWS_AS(compose::composed_symbol_clean(plan, ex, {}), ValidationError);
}

TEST_CASE("oracle pairing of a zero amplitude vanishes") {
  const auto p = psido("0");
  const auto plan = compose::build_composed_phase(p.k1, p.k2, p.seed);
  const auto ex = compose::intersection_excess(plan, p.seed, 10);
  const auto in = compose::default_oracle_inputs(plan, ex, 1.0, 0.5, 0.5);
  CHECK(compose::compose_kernels_oracle(plan, in, 4.0).value == cplx(0.0));
}
