// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Taylor-truncated almost analytic extensions
//
//   f~(x + iy) = sum_{|alpha| <= K} d^alpha f(x) (iy)^alpha / alpha!
//
// evaluated without forming the multi-index sum: the inner part equals
// sum_k i^k g_k where g_k are the Taylor coefficients of s -> f(x + s y).
// Only real points are ever fed to the expression.

#ifndef FIOCALC_ALMOST_ANALYTIC_HPP
#define FIOCALC_ALMOST_ANALYTIC_HPP

#include <complex>
#include <string>
#include <vector>

#include "fiocalc/expr.hpp"
#include "fiocalc/linalg.hpp"

namespace fiocalc::aa {

using cplx = std::complex<double>;
using expr::Expr;
using linalg::CMatrix;
using linalg::CVector;

inline constexpr int kDefaultOrder = 8;

struct AAExtension {
  Expr f;
  int order = kDefaultOrder;
};

AAExtension extend(const Expr& f, int order = kDefaultOrder);

// f~ at a complex point.
cplx value(const AAExtension& ext, const std::vector<cplx>& z);

// Extensions of f and of its first and second derivatives in `vars`, all at
// the complex point z. grad(j) = (d_j f)~(z), hess(j, k) = (d_j d_k f)~(z).
struct Derivatives {
  cplx value{};
  CVector grad;
  CMatrix hess;
};
Derivatives derivatives(const Expr& f, int order, const std::vector<cplx>& z,
                        const std::vector<int>& vars, int max_derivative = 2);

// d-bar_j f~ (z) for every variable j, exact for the truncated extension:
// 0.5 i^K (y . grad)^K d_j f / K!.
std::vector<cplx> dbar(const AAExtension& ext, const std::vector<cplx>& z);

struct DbarFit {
  bool exact = false;  // d-bar identically zero on the samples
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::vector<double> heights;
  std::vector<double> values;
};

// Least squares slope of log max_j |dbar_j f~(x + i h v)| against log h for
// h log-spaced in [h_min, h_max], worst case over the directions.
DbarFit dbar_order(const AAExtension& ext, const std::vector<double>& x,
                   const std::vector<std::vector<double>>& directions, double h_min = 1e-3,
                   double h_max = 1e-1, int samples = 9);

// z'' = h(z') with every component of h an extension of a real-variable
// expression in z' (the first `dim` variables of the expressions).
struct GraphManifold {
  int dim = 0;
  std::vector<Expr> h;
  int order = kDefaultOrder;
};

struct EquivalenceResult {
  bool equivalent = true;
  double worst_ratio = 0.0;   // max d / s^N over accepted samples and N
  double worst_growth = 0.0;  // largest fitted growth exponent as samples approach the trace
  int max_order_tested = 0;
  std::string reason;
};

struct EquivalenceOptions {
  int max_order = 4;
  double growth_tol = 0.1;
  double trace_tol = 1e-12;
  double noise_floor = 1e-13;
  double h_min = 1e-3;
  double h_max = 1e-1;
  int heights = 7;
};

// Condition |h1 - h2| <= C_N |Im h2|^N checked along complex sample points
// x' + i h v that approach real base points x' as h -> 0.
EquivalenceResult manifolds_equivalent(const GraphManifold& m1, const GraphManifold& m2,
                                       const std::vector<std::vector<double>>& base_points,
                                       const std::vector<std::vector<double>>& directions,
                                       const EquivalenceOptions& opt = {});

}  // namespace fiocalc::aa

#endif  // FIOCALC_ALMOST_ANALYTIC_HPP
