// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fiocalc/symbol.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using symbol::cplx;

TEST_CASE("sqrt of d phi for x1*theta1") {
  const auto ph = phase::make_phase("x1*theta1", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  for (double lam : {0.5, 1.0, 2.0}) {
    const auto psi = symbol::make_psi(ph, cp, lam);
    const auto sd = symbol::sqrt_dphi(ph, cls, cp.point, psi);
    // psi = xi0 (x - x0) - lam/2 (x - x0)^2, so the Hessian is [[lam, 1], [1, 0]].
    CHECK(std::abs(sd.hessian(0, 0) - lam) < 1e-12);
    CHECK(std::abs(sd.hessian(0, 1) - 1.0) < 1e-12);
    CHECK(std::abs(sd.hessian(1, 1)) < 1e-12);
    CHECK(std::abs(sd.det - 1.0) < 1e-12);
    CHECK(std::abs(sd.value - oracles::tracked_inv_sqrt_det(sd.hessian)) < 1e-8);
    CHECK(sd.grade == doctest::Approx(0.5));
  }
}

TEST_CASE("Hessian picks up the imaginary part of the phase") {
  const auto ph = phase::make_phase("x1*theta1 + i*theta1*x1^2/2", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  const auto sd = symbol::sqrt_dphi(ph, cls, cp.point, symbol::make_psi(ph, cp, 1.0));
  // phi_xx = i theta = i and psi_xx = -lambda.
  CHECK(std::abs(sd.hessian(0, 0) - cplx(1.0, 1.0)) < 1e-12);
  CHECK(std::abs(sd.value - oracles::tracked_inv_sqrt_det(sd.hessian)) < 1e-8);
}

TEST_CASE("principal symbol of the identity kernel") {
  const auto ph = phase::make_phase("x1*theta1", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.0});
  const auto cls = phase::classify(ph, {cp.point});
  const auto psi = symbol::make_psi(ph, cp, 1.0);
  const auto sv = symbol::principal_symbol(ph, symbol::make_amplitude(ph, "1", 0), cls, cp, psi);
  CHECK(std::abs(sv.xi[0] - 1.0) < 1e-12);
  CHECK(std::abs(sv.value - symbol::sqrt_dphi(ph, cls, cp.point, psi).value) < 1e-14);
  const auto zero = symbol::principal_symbol(ph, symbol::make_amplitude(ph, "0", 0), cls, cp, psi);
  CHECK(zero.value == cplx(0.0));
}

TEST_CASE("clean symbol integrates the amplitude over the fiber") {
  const auto ph = phase::make_phase("x1*theta1", 1, 2);
  const auto cp = phase::find_critical(ph, {1.0, 0.0}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  const auto psi = symbol::make_psi(ph, cp, 1.0);
  symbol::FiberOptions fo;
  fo.box = {{-1.5, 1.5}};
  const auto sv =
      symbol::principal_symbol(ph, symbol::make_amplitude(ph, "bump(theta2/norm(theta1))", 0), cls, cp, psi, fo);
  const double integral =
      oracles::simpson([](double s) { return cplx(oracles::bump(s * s)); }, -1, 1, 200000).real();
  CHECK(std::abs(sv.value - integral * sv.sqrt_dphi.value) < 1e-9 * std::abs(sv.value));
  symbol::FiberOptions small;
  small.box = {{-0.5, 0.5}};
  CHECK_THROWS_AS(symbol::principal_symbol(ph, symbol::make_amplitude(ph, "bump(theta2/norm(theta1))", 0), cls, cp,
                                           psi, small),
                  ValidationError);
}

TEST_CASE("pairing prediction against the oracle") {
  const auto ph = phase::make_phase("x1*theta1", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto amp = symbol::make_amplitude(ph, "1", 0);
  symbol::PairingInputs in;
  in.u = expr::parse("bump(x1/0.5)", ph.layout);
  in.window = expr::parse("plateau(0.5, (theta1-1)/0.5)", ph.layout);
  in.x_box = {{-0.5, 0.5}};
  in.eta_box = {{0.5, 1.5}};
  in.t_grid = {1e3};
  const auto r = symbol::pairing_T(ph, amp, symbol::make_psi(ph, cp, 1.0), cp, in);
  CHECK(r.rel_error[0] <= 10.0 / 1e3);
}

TEST_CASE("transition identity between two psi") {
  const auto ph = phase::make_phase("x1*theta1", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  const auto a = symbol::sqrt_dphi(ph, cls, cp.point, symbol::make_psi(ph, cp, 0.5));
  const auto b = symbol::sqrt_dphi(ph, cls, cp.point, symbol::make_psi(ph, cp, 2.0));
  CHECK(std::abs(symbol::transition_identity(a, b) - 1.0) < 1e-10);
}
