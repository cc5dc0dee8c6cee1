// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute force evaluation of oscillatory integrals by composite tensor
// Gauss-Legendre quadrature, and log-log order fitting.

#ifndef FIOCALC_ORACLE_HPP
#define FIOCALC_ORACLE_HPP

#include <complex>
#include <string>
#include <vector>

#include "fiocalc/expr.hpp"

namespace fiocalc::oracle {

using cplx = std::complex<double>;
using expr::Expr;

inline constexpr int kPanelNodes = 20;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Cached, thread safe.
const GaussRule& gauss_legendre(int n);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct QuadOptions {
  double rtol = 1e-12;
  double atol = 1e-15;
  double c = 4.0;               // initial nodes per axis = c * (phase change in radians) / 2
  int min_nodes = kPanelNodes;  // per axis
  int max_nodes = 1 << 20;      // per axis
  double max_points = 4e8;      // per evaluation level
  bool truncate_damped = true;
  double damping_cut = 41.5;    // drop where t Im F exceeds this (e^-41.5 ~ 1e-18)
};

struct QuadResult {
  cplx value{};
  std::vector<int> nodes;          // per axis, final level
  std::vector<Interval> box;       // after truncation
  std::vector<cplx> history;       // one value per doubling level
  double change = 0.0;             // |last - previous|
  double points = 0.0;             // integrand evaluations, all levels
  bool truncated = false;
};

// Tensor rule with a fixed number of nodes per axis (multiples of 20).
// `point` supplies values for the variables that are not integrated.
cplx tensor_sum(const expr::Program& program, const std::vector<int>& axes,
                const std::vector<Interval>& box, const std::vector<int>& nodes,
                const std::vector<cplx>& point, double* points = nullptr);

// Integrates `integrand` over the box, doubling the nodes on every axis until
// two successive levels agree to rtol (relative) or atol (absolute).
QuadResult integrate(const Expr& integrand, const std::vector<int>& axes,
                     const std::vector<Interval>& box, const std::vector<cplx>& point,
                     std::vector<int> initial_nodes, const QuadOptions& opt = {});

// integral of exp(i t F) u over the box. Initial node counts follow the
// oscillation of Re F; regions where t Im F exceeds the damping cut are
// trimmed from the box first.
QuadResult osc_integral(const Expr& F, const Expr& u, const std::vector<int>& axes,
                        const std::vector<Interval>& box, double t,
                        const std::vector<cplx>& point, const QuadOptions& opt = {});

// Per-axis phase change t * max|d_axis Re F| * length sampled on a coarse grid.
std::vector<double> phase_variation(const Expr& F, const std::vector<int>& axes,
                                    const std::vector<Interval>& box, double t,
                                    const std::vector<cplx>& point);

std::vector<int> initial_nodes(const std::vector<double>& variation, const QuadOptions& opt);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log
  double residual = 0.0;   // root mean square in log space
  std::vector<double> t;
  std::vector<double> err;
  std::vector<double> dropped_t;  // samples at or below the noise floor
};

// Least squares line through (log t, log err). Samples with err <= floor
// (or non-finite) are dropped and reported; at least 4 must remain.
OrderFit fit_order(const std::vector<double>& t, const std::vector<double>& err,
                   double noise_floor = 1e-15);

}  // namespace fiocalc::oracle

#endif  // FIOCALC_ORACLE_HPP
