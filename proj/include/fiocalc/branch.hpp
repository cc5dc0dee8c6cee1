// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Square root of det((1/i) H)^-1 selected by continuation along
// A(s) = (1 - s)(1/i) H + s I from s = 1, where the value is 1, down to s = 0.

#ifndef FIOCALC_BRANCH_HPP
#define FIOCALC_BRANCH_HPP

#include <complex>
#include <vector>

#include "fiocalc/linalg.hpp"

namespace fiocalc::branch {

using cplx = std::complex<double>;
using linalg::CMatrix;

struct BranchOptions {
  int base_intervals = 8;
  int max_depth = 40;
  double min_abs_det = 1e-10;
};

struct BranchedSqrt {
  CMatrix a;             // (1/i) H
  cplx det_a{1.0};       // det A(0)
  cplx value{1.0};       // r with r^2 det A(0) = 1
  std::vector<double> s_nodes;   // accepted path nodes, from 1 down to 0
  std::vector<cplx> path_dets;   // det A(s) at those nodes
  int subdivisions = 0;          // accepted intervals
  int max_depth_used = 0;
  double max_angle_step = 0.0;   // largest |arg| increment between nodes
  double residual = 0.0;         // |r^2 det A - 1|
};

BranchedSqrt branched_inv_sqrt_det(const CMatrix& hessian, const BranchOptions& opt = {});

}  // namespace fiocalc::branch

#endif  // FIOCALC_BRANCH_HPP
