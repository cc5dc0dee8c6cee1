// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fiocalc/phase.hpp"

using namespace fiocalc;
using phase::cplx;

TEST_CASE("validate_phase on a positive type phase") {
  const auto ph = phase::make_phase("x1*theta1 + i*norm(theta)*x1^2/2", 1, 1);
  const auto rep = phase::validate_phase(ph);
  CHECK(rep.pass);
  CHECK(rep.max_euler_residual < 1e-10);
  // Im phi = theta x^2 / 2 on the patch; its minimum over the samples is
  // bounded below by 0 and above by the grid value nearest x = 0.
  CHECK(rep.min_im_phi >= 0.0);
  CHECK(rep.min_im_phi < 1e-2);
}

TEST_CASE("negative imaginary part fails validation") {
  const auto bad = phase::make_phase("x1*theta1 - i*norm(theta)*x1^2", 1, 1);
  const auto rep = phase::validate_phase(bad);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.positive);
}

TEST_CASE("non-homogeneous phase fails validation") {
  const auto bad = phase::make_phase("x1*theta1^2", 1, 1);
  CHECK_FALSE(phase::validate_phase(bad).homogeneous);
}

TEST_CASE("critical points") {
  const auto cp = phase::find_critical(phase::make_phase("(x1-0.5)*theta1", 1, 1), {1.0}, {0.3});
  CHECK(std::abs(cp.point[0] - 0.5) < 1e-12);
  CHECK(cp.residual < 1e-12);
  const auto ph = phase::make_phase("x1*theta1 + i*norm(theta)*x1^2/2", 1, 1);
  const auto c2 = phase::find_critical(ph, {1.0}, {0.3});
  CHECK(std::abs(c2.point[0]) < 1e-12);
  CHECK(c2.real);
}

TEST_CASE("classification of a dummy frequency") {
  const auto ph = phase::make_phase("x1*theta1", 1, 2);
  const auto cp = phase::find_critical(ph, {1.0, 0.5}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  CHECK(cls.M == 1);
  CHECK(cls.N == 2);
  CHECK(cls.excess == 1);
  CHECK(cls.kind == phase::Kind::kClean);
  // The differentials of d_theta phi are (1, 0, 0) and 0: one zero singular value.
  REQUIRE(cls.singular_values.size() == 2);
  CHECK(std::abs(cls.singular_values[0] - 1.0) < 1e-12);
  CHECK(std::abs(cls.singular_values[1]) < 1e-12);
}

TEST_CASE("non-degenerate classification") {
  const auto ph = phase::make_phase("x1*theta1 + i*norm(theta)*x1^2/2", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto cls = phase::classify(ph, {cp.point});
  CHECK(cls.kind == phase::Kind::kNonDegenerate);
  CHECK(cls.excess == 0);
}

TEST_CASE("Lagrangian sample and positivity") {
  const auto ph = phase::make_phase("x1*theta1 + i*norm(theta)*x1^2/2", 1, 1);
  const auto cp = phase::find_critical(ph, {1.0}, {0.3});
  const auto ls = phase::lambda_sample(ph, cp);
  // x = 0, xi = theta + i theta x = 1.
  CHECK(std::abs(ls.xi[0] - 1.0) < 1e-12);
  CHECK(ls.homogeneity_error < 1e-12);
  CHECK(phase::positivity_check(ph, cp).pass);
  const auto bad = phase::make_phase("x1*theta1 - i*norm(theta)*x1^2", 1, 1);
  CHECK_FALSE(phase::positivity_check(bad, phase::find_critical(bad, {1.0}, {0.1})).pass);
}
