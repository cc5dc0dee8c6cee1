// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Complex stationary phase for integrals of exp(i t F(x, w)) u(x, w) dx with
// Im F >= 0 and a non-degenerate critical point at the origin.

#ifndef FIOCALC_STATIONARY_HPP
#define FIOCALC_STATIONARY_HPP

#include <complex>
#include <string>
#include <vector>

#include "fiocalc/almost_analytic.hpp"
#include "fiocalc/branch.hpp"
#include "fiocalc/expr.hpp"
#include "fiocalc/oracle.hpp"

namespace fiocalc::stationary {

using cplx = std::complex<double>;
using expr::Expr;
using expr::VarLayout;

struct SPProblem {
  Expr F;
  Expr u;
  VarLayout layout;  // {x: n, w: k}
  int n = 1;
  int k = 0;
  std::vector<oracle::Interval> box;  // integration box in x (support of u)
  int aa_order = aa::kDefaultOrder;
};

// Parses F and u over the layout {x: n, w: k}. The box defaults to [-1, 1]^n.
// Checks d_x F(0,0) = 0 and |det d_x^2 F(0,0)| >= 1e-10.
SPProblem make_problem(const std::string& F, const std::string& u, int n, int k = 0,
                       std::vector<oracle::Interval> box = {});
SPProblem make_problem(Expr F, Expr u, VarLayout layout, std::vector<oracle::Interval> box = {});

struct CriticalManifoldPoint {
  std::vector<double> w;
  std::vector<cplx> Z;
  double residual = 0.0;
  int iterations = 0;
};

// Complex Newton on d_z F~(z, w) = 0 seeded at the real critical point z = 0,
// with continuation in w when the direct solve fails.
CriticalManifoldPoint critical_manifold(const SPProblem& p, const std::vector<double>& w);

struct SPExpansion {
  std::vector<double> w;
  std::vector<cplx> Z;
  cplx phase_value{};    // F~(Z(w), w)
  cplx C0{};             // (2 pi)^(n/2) branched det((1/i) F~'')^(-1/2)
  cplx u_value{};        // u~(Z(w), w)
  branch::BranchedSqrt branch;
  double residual = 0.0;

  // t^(-n/2) exp(i t F~) C0 u~
  cplx at(double t) const;
  int n = 1;
};

SPExpansion leading_term(const SPProblem& p, const std::vector<double>& w);

// Oracle value of the integral at w.
oracle::QuadResult integral(const SPProblem& p, const std::vector<double>& w, double t,
                            const oracle::QuadOptions& opt = {});

std::vector<double> default_t_grid();

struct RemainderReport {
  SPExpansion expansion;
  std::vector<double> t;
  std::vector<cplx> integral;
  std::vector<cplx> leading;
  std::vector<double> error;     // |I - L|
  oracle::OrderFit fit;
  double expected_slope = 0.0;   // -(n/2 + 1)
  bool at_noise_floor = false;
};

// Slope of log|I(t) - L(t)| against log t.
RemainderReport remainder_order(const SPProblem& p, const std::vector<double>& w,
                                const std::vector<double>& t_grid,
                                const oracle::QuadOptions& opt = {}, double noise_floor = 1e-13);

}  // namespace fiocalc::stationary

#endif  // FIOCALC_STATIONARY_HPP
