// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fiocalc/jet.hpp"
#include "fiocalc/linalg.hpp"

namespace fiocalc::stationary {

namespace {

std::vector<int> iota(int begin, int count) {
  std::vector<int> v(static_cast<size_t>(count));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

std::vector<cplx> join(const std::vector<cplx>& z, const std::vector<double>& w) {
  std::vector<cplx> p = z;
  p.insert(p.end(), w.begin(), w.end());
  return p;
}

// One Newton solve of d_z F~(z, w) = 0 from z.
bool newton_z(const SPProblem& p, const std::vector<double>& w, std::vector<cplx>& z,
              double* residual, int* iterations) {
  const auto xs = iota(0, p.n);
  double res = INFINITY;
  for (int it = 0; it <= 50; ++it) {
    const auto d = aa::derivatives(p.F, p.aa_order, join(z, w), xs, 2);
    res = d.grad.cwiseAbs().maxCoeff();
    if (!std::isfinite(res)) return false;
    if (res <= 1e-12) {
      *residual = res;
      *iterations += it;
      return true;
    }
    if (it == 50) break;
    if (linalg::rank(d.hess).rank < p.n) throw ConvergenceError("critical_manifold: Jacobian singular");
    const linalg::CVector step = linalg::solve(d.hess, d.grad);
    double lambda = 1.0;
    for (;;) {
      std::vector<cplx> trial(z.size());
      for (int k = 0; k < p.n; ++k) trial[static_cast<size_t>(k)] = z[static_cast<size_t>(k)] - lambda * step(k);
      const auto dt = aa::derivatives(p.F, p.aa_order, join(trial, w), xs, 1);
      const double rt = dt.grad.cwiseAbs().maxCoeff();
      if ((std::isfinite(rt) && rt < res) || lambda < 1e-4) {
        z = trial;
        break;
      }
      lambda *= 0.5;
    }
  }
  *residual = res;
  return false;
}

}  // namespace

SPProblem make_problem(const std::string& F, const std::string& u, int n, int k,
                       std::vector<oracle::Interval> box) {
  if (n < 1 || k < 0) throw ValidationError("stationary phase needs n >= 1 and k >= 0");
  std::vector<expr::VarGroup> groups{{"x", n, false}};
  if (k > 0) groups.push_back({"w", k, false});
  VarLayout layout(groups);
  return make_problem(expr::parse(F, layout), expr::parse(u, layout), layout, std::move(box));
}

SPProblem make_problem(Expr F, Expr u, VarLayout layout, std::vector<oracle::Interval> box) {
  SPProblem p;
  p.F = std::move(F);
  p.u = std::move(u);
  p.layout = std::move(layout);
  p.n = p.layout.group("x").size;
  p.k = p.layout.has_group("w") ? p.layout.group("w").size : 0;
  if (p.layout.dim() != p.n + p.k || p.layout.offset("x") != 0) {
    throw ValidationError("stationary phase layout must be {x, w}");
  }
  if (box.empty()) box.assign(static_cast<size_t>(p.n), oracle::Interval{-1.0, 1.0});
  if (static_cast<int>(box.size()) != p.n) throw ValidationError("integration box dimension must equal n");
  p.box = std::move(box);
  const std::vector<cplx> origin(static_cast<size_t>(p.n + p.k));
  const auto xs = iota(0, p.n);
  const auto g = jets::gradient(p.F, origin, xs);
  for (const auto& c : g) {
    if (std::abs(c) > 1e-10) throw ValidationError("d_x F(0,0) != 0: the origin is not critical");
  }
  if (std::abs(linalg::det(jets::hessian(p.F, origin, xs))) < 1e-10) {
    throw ValidationError("d_x^2 F(0,0) is singular: the critical point is degenerate");
  }
  return p;
}

CriticalManifoldPoint critical_manifold(const SPProblem& p, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != p.k) throw ValidationError("w dimension does not match the problem");
  CriticalManifoldPoint out;
  out.w = w;
  std::vector<cplx> z(static_cast<size_t>(p.n));
  double res = 0.0;
  int iters = 0;
  if (!newton_z(p, w, z, &res, &iters)) {
    // Continuation from w = 0 in equal steps.
    constexpr int kSteps = 16;
    z.assign(static_cast<size_t>(p.n), cplx{});
    for (int s = 1; s <= kSteps; ++s) {
      std::vector<double> ws(w.size());
      for (size_t k = 0; k < w.size(); ++k) ws[k] = w[k] * s / kSteps;
      if (!newton_z(p, ws, z, &res, &iters)) {
        throw ConvergenceError("critical_manifold: no convergence (residual " + std::to_string(res) + ")");
      }
    }
  }
  out.Z = z;
  out.residual = res;
  out.iterations = iters;
  return out;
}

cplx SPExpansion::at(double t) const {
  return std::pow(t, -0.5 * n) * std::exp(cplx(0.0, t) * phase_value) * C0 * u_value;
}

SPExpansion leading_term(const SPProblem& p, const std::vector<double>& w) {
  const auto cm = critical_manifold(p, w);
  SPExpansion e;
  e.n = p.n;
  e.w = w;
  e.Z = cm.Z;
  e.residual = cm.residual;
  const auto pt = join(cm.Z, w);
  const auto d = aa::derivatives(p.F, p.aa_order, pt, iota(0, p.n), 2);
  e.phase_value = d.value;
  e.branch = branch::branched_inv_sqrt_det(d.hess);
  e.C0 = std::pow(2.0 * std::numbers::pi, 0.5 * p.n) * e.branch.value;
  e.u_value = aa::value(aa::AAExtension{p.u, p.aa_order}, pt);
  return e;
}

oracle::QuadResult integral(const SPProblem& p, const std::vector<double>& w, double t,
                            const oracle::QuadOptions& opt) {
  std::vector<cplx> point(static_cast<size_t>(p.n + p.k));
  for (int k = 0; k < p.k; ++k) point[static_cast<size_t>(p.n + k)] = w[static_cast<size_t>(k)];
  return oracle::osc_integral(p.F, p.u, iota(0, p.n), p.box, t, point, opt);
}

std::vector<double> default_t_grid() {
  return {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
}

RemainderReport remainder_order(const SPProblem& p, const std::vector<double>& w,
                                const std::vector<double>& t_grid, const oracle::QuadOptions& opt,
                                double noise_floor) {
  RemainderReport r;
  r.expansion = leading_term(p, w);
  r.expected_slope = -(0.5 * p.n + 1.0);
  r.t = t_grid;
  for (double t : t_grid) {
    const cplx I = integral(p, w, t, opt).value;
    const cplx L = r.expansion.at(t);
    r.integral.push_back(I);
    r.leading.push_back(L);
    r.error.push_back(std::abs(I - L));
  }
  const auto above = std::count_if(r.error.begin(), r.error.end(), [&](double e) { return e > noise_floor; });
  if (above < 4) {
    r.at_noise_floor = true;
    r.fit.t = r.t;
    r.fit.err = r.error;
    return r;
  }
  r.fit = oracle::fit_order(r.t, r.error, noise_floor);
  return r;
}

}  // namespace fiocalc::stationary
