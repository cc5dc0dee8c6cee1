// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fiocalc/branch.hpp"
#include "fiocalc/error.hpp"
#include "oracles.hpp"

using namespace fiocalc;
using branch::cplx;

namespace {
linalg::CMatrix one(cplx v) {
  linalg::CMatrix h(1, 1);
  h(0, 0) = v;
  return h;
}

linalg::CMatrix random_hessian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n), c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = g(rng);
      c(i, j) = g(rng);
    }
  const Eigen::MatrixXd re = (a + a.transpose()) / 2;
  const Eigen::MatrixXd im = c * c.transpose() / n;
  return re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
}
}  // namespace

TEST_CASE("scalar Fresnel branches") {
  const double q = std::numbers::pi / 4;
  const auto p = branch::branched_inv_sqrt_det(one(1.0));
  CHECK(std::abs(p.value - std::polar(1.0, q)) < 1e-12);
  CHECK(std::abs(p.value * p.value * cplx(0, -1) - 1.0) < 1e-12);
  const auto m = branch::branched_inv_sqrt_det(one(-1.0));
  CHECK(std::abs(m.value - std::polar(1.0, -q)) < 1e-12);
  CHECK(std::abs(branch::branched_inv_sqrt_det(one(cplx(0, 1))).value - 1.0) < 1e-12);
}

TEST_CASE("random Hessians agree with fine path tracking") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto h = random_hessian(rng, 1 + k % 4);
    const auto b = branch::branched_inv_sqrt_det(h);
    CHECK(std::abs(b.value - oracles::tracked_inv_sqrt_det(h)) < 1e-8);
    CHECK(b.residual < 1e-10);
  }
}

TEST_CASE("block additivity and conjugation") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto h1 = random_hessian(rng, 2);
    const auto h2 = random_hessian(rng, 3);
    linalg::CMatrix block = linalg::CMatrix::Zero(5, 5);
    block.topLeftCorner(2, 2) = h1;
    block.bottomRightCorner(3, 3) = h2;
    const cplx r1 = branch::branched_inv_sqrt_det(h1).value;
    const cplx r2 = branch::branched_inv_sqrt_det(h2).value;
    CHECK(std::abs(branch::branched_inv_sqrt_det(block).value - r1 * r2) < 1e-10);
    const linalg::CMatrix mirrored = -h1.conjugate();
    CHECK(std::abs(branch::branched_inv_sqrt_det(mirrored).value - std::conj(r1)) < 1e-10);
  }
}

TEST_CASE("singular matrices are rejected") {
  CHECK_THROWS_AS(branch::branched_inv_sqrt_det(one(0.0)), BranchError);
}
