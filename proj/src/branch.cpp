// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/branch.hpp"

#include <cmath>
#include <numbers>

#include "fiocalc/error.hpp"

namespace fiocalc::branch {

namespace {

struct Tracker {
  const CMatrix& a;
  const BranchOptions& opt;
  BranchedSqrt* out;
  CMatrix id;

  cplx det_at(double s) const {
    const CMatrix m = (1.0 - s) * a + s * id;
    const cplx d = linalg::det(m);
    if (std::abs(d) < opt.min_abs_det) {
      throw BranchError("homotopy leaves GL: |det A(s)| < " + std::to_string(opt.min_abs_det) +
                        " at s = " + std::to_string(s));
    }
    return d;
  }

  // Advances from (s0, d0, r0) to s1 and returns the tracked root there.
  cplx step(double s0, cplx d0, cplx r0, double s1, cplx d1, int depth) {
    if (depth > opt.max_depth) {
      throw BranchError("homotopy leaves GL: path subdivision exceeded depth " +
                        std::to_string(opt.max_depth));
    }
    const double sm = 0.5 * (s0 + s1);
    const cplx dm = det_at(sm);
    const double a1 = std::abs(std::arg(dm / d0));
    const double a2 = std::abs(std::arg(d1 / dm));
    if (a1 + a2 < 0.5 * std::numbers::pi) {
      out->max_depth_used = std::max(out->max_depth_used, depth);
      out->max_angle_step = std::max(out->max_angle_step, std::abs(std::arg(d1 / d0)));
      // r changes by half the determinant's angle, under pi/4: the principal
      // root of the ratio is the continuous choice.
      const cplx r1 = r0 * std::sqrt(d0 / d1);
      out->s_nodes.push_back(s1);
      out->path_dets.push_back(d1);
      ++out->subdivisions;
      return r1;
    }
    const cplx rm = step(s0, d0, r0, sm, dm, depth + 1);
    return step(sm, dm, rm, s1, d1, depth + 1);
  }
};

}  // namespace

BranchedSqrt branched_inv_sqrt_det(const CMatrix& hessian, const BranchOptions& opt) {
  BranchedSqrt out;
  const Eigen::Index k = hessian.rows();
  if (hessian.cols() != k) throw Error(ErrorCode::kInternal, "Hessian must be square");
  out.a = cplx(0.0, -1.0) * hessian;
  if (k == 0) {
    out.s_nodes = {1.0, 0.0};
    out.path_dets = {1.0, 1.0};
    return out;
  }
  Tracker tr{out.a, opt, &out, CMatrix::Identity(k, k)};
  double s0 = 1.0;
  cplx d0 = 1.0;
  cplx r = 1.0;
  out.s_nodes.push_back(s0);
  out.path_dets.push_back(d0);
  for (int j = 1; j <= opt.base_intervals; ++j) {
    const double s1 = 1.0 - static_cast<double>(j) / opt.base_intervals;
    const cplx d1 = tr.det_at(s1);
    r = tr.step(s0, d0, r, s1, d1, 0);
    s0 = s1;
    d0 = d1;
  }
  out.det_a = d0;
  // Snap to the exact root of 1/det nearest the tracked value.
  const cplx root = std::sqrt(1.0 / d0);
  out.value = std::abs(root - r) <= std::abs(root + r) ? root : -root;
  out.residual = std::abs(out.value * out.value * d0 - 1.0);
  return out;
}

}  // namespace fiocalc::branch
