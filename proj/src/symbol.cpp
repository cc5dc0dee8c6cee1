// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fiocalc/almost_analytic.hpp"
#include "fiocalc/jet.hpp"
#include "fiocalc/parallel.hpp"

namespace fiocalc::symbol {

namespace {

bool is_real(const std::vector<cplx>& z) {
  return std::all_of(z.begin(), z.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

CMatrix hessian_at(const PhaseFunction& phi, const std::vector<cplx>& z, const std::vector<int>& vars) {
  if (is_real(z)) return jets::hessian(phi.expr, z, vars);
  return aa::derivatives(phi.expr, phi.aa_order, z, vars, 2).hess;
}

cplx amp_at(const PhaseFunction& phi, const Expr& a, const std::vector<cplx>& z) {
  return aa::value(aa::AAExtension{a, phi.aa_order}, z);
}

// Composite Gauss-Legendre nodes and weights on an interval, `n` a multiple of 20.
void composite_rule(const oracle::Interval& iv, int n, std::vector<double>& x, std::vector<double>& w) {
  const auto& g = oracle::gauss_legendre(oracle::kPanelNodes);
  const int panels = n / oracle::kPanelNodes;
  const double h = iv.length() / panels;
  x.clear();
  w.clear();
  for (int p = 0; p < panels; ++p) {
    const double mid = iv.lo + (p + 0.5) * h;
    for (int k = 0; k < oracle::kPanelNodes; ++k) {
      x.push_back(mid + 0.5 * h * g.nodes[static_cast<size_t>(k)]);
      w.push_back(0.5 * h * g.weights[static_cast<size_t>(k)]);
    }
  }
}

}  // namespace

AuxPsi make_psi(const PhaseFunction& phi, const CriticalPoint& cp, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("psi concavity lambda must be > 0");
  if (!cp.real) throw ValidationError("psi needs a real critical point");
  if (cp.residual > 1e-10) throw ValidationError("critical point residual exceeds 1e-10");
  AuxPsi psi;
  psi.lambda = lambda;
  const auto xi = phase::x_gradient(phi, cp.point);
  Expr acc = expr::constant(0.0);
  for (int k = 0; k < phi.n; ++k) {
    const double x0 = cp.point[static_cast<size_t>(k)].real();
    psi.x0.push_back(x0);
    psi.xi0.push_back(xi[static_cast<size_t>(k)].real());
    const Expr dx = expr::sub(expr::variable(phi.layout, k), expr::constant(x0));
    acc = expr::add(acc, expr::mul(expr::constant(psi.xi0.back()), dx));
    acc = expr::sub(acc, expr::mul(expr::constant(0.5 * lambda), expr::pow(dx, expr::constant(2.0))));
  }
  psi.psi = acc;
  // phi - psi must be non-degenerate in (x, theta') at the base point.
  const CMatrix D = phase::theta_differentials(phi, cp.point);
  std::vector<int> vars(static_cast<size_t>(phi.n));
  std::iota(vars.begin(), vars.end(), 0);
  for (int j : linalg::select_rows(D, linalg::rank(D).rank)) vars.push_back(phi.n + j);
  CMatrix H = hessian_at(phi, cp.point, vars);
  for (int k = 0; k < phi.n; ++k) H(k, k) += lambda;
  if (std::abs(linalg::det(H)) < 1e-10) {
    throw ValidationError("phi - psi is degenerate at the base point; check the classification");
  }
  return psi;
}

SqrtDPhi sqrt_dphi(const PhaseFunction& phi, const Classification& cls,
                   const std::vector<cplx>& point, const AuxPsi& psi) {
  SqrtDPhi s;
  s.vars.resize(static_cast<size_t>(phi.n));
  std::iota(s.vars.begin(), s.vars.end(), 0);
  for (int j : cls.theta_prime) s.vars.push_back(phi.n + j);
  s.hessian = hessian_at(phi, point, s.vars);
  for (int k = 0; k < phi.n; ++k) s.hessian(k, k) += psi.lambda;
  s.branch = branch::branched_inv_sqrt_det(s.hessian);
  s.matrix = s.branch.a;
  s.det = s.branch.det_a;
  s.value = s.branch.value;
  s.grade = 0.5 * (cls.N - cls.excess);
  return s;
}

Amplitude make_amplitude(const PhaseFunction& phi, const std::string& source, double degree) {
  return make_amplitude(phi, expr::parse(source, phi.layout), degree);
}

Amplitude make_amplitude(const PhaseFunction& phi, Expr a, double degree) {
  std::vector<int> freq(static_cast<size_t>(phi.N));
  std::iota(freq.begin(), freq.end(), phi.n);
  const double res = phase::euler_residual(a, freq, degree, phase::sample_patch(phi, 50, 7));
  if (res > 1e-10) {
    throw ValidationError("amplitude is not homogeneous of degree " + std::to_string(degree) +
                          " (Euler residual " + std::to_string(res) + ")");
  }
  return Amplitude{std::move(a), degree};
}

double order_of(const PhaseFunction& phi, double degree) {
  return degree - 0.25 * (phi.n - 2.0 * phi.N);
}

SymbolValue principal_symbol(const PhaseFunction& phi, const Amplitude& amp,
                             const Classification& cls, const CriticalPoint& cp, const AuxPsi& psi,
                             const FiberOptions& fiber) {
  SymbolValue sv;
  sv.excess = cls.excess;
  sv.order = order_of(phi, amp.degree);
  sv.grade = sv.order - cls.excess + 0.25 * phi.n;
  sv.value_exponent = sv.order + 0.5 * cls.excess - 0.25 * phi.n;
  sv.x.assign(cp.point.begin(), cp.point.begin() + phi.n);
  sv.xi = phase::x_gradient(phi, cp.point);
  sv.amplitude = amp_at(phi, amp.a, cp.point);
  sv.sqrt_dphi = sqrt_dphi(phi, cls, cp.point, psi);
  if (cls.excess == 0 && !fiber.quadrature_for_point) {
    sv.value = sv.amplitude * sv.sqrt_dphi.value;
    return sv;
  }

  const int e = cls.excess;
  if (static_cast<int>(fiber.box.size()) != e) {
    throw ValidationError("clean phase needs a fiber box with one interval per excess variable");
  }
  for (const auto& iv : fiber.box) {
    if (!(iv.hi > iv.lo)) throw ValidationError("fiber box interval is empty");
  }
  // Support check on the box faces.
  {
    const int g = 9;
    std::vector<int> idx(static_cast<size_t>(e), 0);
    const long long total = static_cast<long long>(std::pow(g, e));
    for (long long flat = 0; flat < total; ++flat) {
      long long r = flat;
      bool face = false;
      std::vector<cplx> p = cp.point;
      for (int a = 0; a < e; ++a) {
        idx[static_cast<size_t>(a)] = static_cast<int>(r % g);
        r /= g;
        const auto& iv = fiber.box[static_cast<size_t>(a)];
        const int i = idx[static_cast<size_t>(a)];
        face = face || i == 0 || i == g - 1;
        p[static_cast<size_t>(phi.n + cls.theta_excess[static_cast<size_t>(a)])] = iv.lo + iv.length() * i / (g - 1);
      }
      if (!face) continue;
      sv.fiber.boundary_max = std::max(sv.fiber.boundary_max, std::abs(expr::eval(amp.a, p)));
    }
    if (sv.fiber.boundary_max > fiber.support_tol) {
      throw ValidationError("amplitude support is not inside the fiber box (max |a| on the boundary " +
                            std::to_string(sv.fiber.boundary_max) + ")");
    }
  }

  const std::vector<cplx> xi0 = sv.xi;
  auto level_value = [&](int nodes_per_axis) {
    std::vector<std::vector<double>> xs(static_cast<size_t>(e));
    std::vector<std::vector<double>> ws(static_cast<size_t>(e));
    for (int a = 0; a < e; ++a) {
      composite_rule(fiber.box[static_cast<size_t>(a)], nodes_per_axis, xs[static_cast<size_t>(a)],
                     ws[static_cast<size_t>(a)]);
    }
    long long total = 1;
    for (int a = 0; a < e; ++a) total *= nodes_per_axis;
    std::vector<cplx> vals(static_cast<size_t>(total));
    parallel_for(static_cast<int>(total), [&](int flat) {
      long long r = flat;
      std::vector<cplx> start = cp.point;
      double w = 1.0;
      for (int a = 0; a < e; ++a) {
        const int i = static_cast<int>(r % nodes_per_axis);
        r /= nodes_per_axis;
        start[static_cast<size_t>(phi.n + cls.theta_excess[static_cast<size_t>(a)])] =
            xs[static_cast<size_t>(a)][static_cast<size_t>(i)];
        w *= ws[static_cast<size_t>(a)][static_cast<size_t>(i)];
      }
      const cplx av = amp_at(phi, amp.a, start);
      if (av == cplx{}) return;
      const auto p = phase::fiber_solve(phi, cls.theta_prime, xi0, start);
      const cplx a = amp_at(phi, amp.a, p);
      vals[static_cast<size_t>(flat)] = w * a * sqrt_dphi(phi, cls, p, psi).value;
    });
    cplx sum{};
    for (const auto& v : vals) sum += v;
    return sum;
  };

  int nodes = oracle::kPanelNodes;
  cplx prev = level_value(nodes);
  sv.fiber.levels = 1;
  for (;;) {
    if (nodes * 2 > fiber.max_nodes) {
      throw QuadratureError("fiber quadrature did not stabilize (last change " +
                            std::to_string(sv.fiber.change) + ")");
    }
    nodes *= 2;
    const cplx cur = level_value(nodes);
    ++sv.fiber.levels;
    sv.fiber.change = std::abs(cur - prev);
    prev = cur;
    if (sv.fiber.change <= fiber.rtol * std::abs(cur) || sv.fiber.change <= fiber.atol) break;
  }
  sv.fiber.nodes.assign(static_cast<size_t>(e), nodes);
  sv.value = prev;
  return sv;
}

PairingRecord pairing_T(const PhaseFunction& phi, const Amplitude& amp, const AuxPsi& psi,
                        const CriticalPoint& cp, const PairingInputs& in) {
  if (static_cast<int>(in.eta_box.size()) != phi.N) {
    throw ValidationError("pairing needs an eta box with one interval per frequency variable");
  }
  const CMatrix D = phase::theta_differentials(phi, cp.point);
  const auto rank = linalg::rank(D);
  if (rank.rank != phi.N) throw ValidationError("pairing_T needs a non-degenerate phase");
  Classification cls;
  cls.N = phi.N;
  cls.M = phi.N;
  cls.theta_prime.resize(static_cast<size_t>(phi.N));
  std::iota(cls.theta_prime.begin(), cls.theta_prime.end(), 0);

  PairingRecord rec;
  const int n = phi.n;
  const int N = phi.N;
  rec.predicted_exponent = N + amp.degree - 0.5 * (n + N);
  rec.sqrt_dphi = sqrt_dphi(phi, cls, cp.point, psi);
  const Expr F = expr::sub(phi.expr, psi.psi);
  const aa::AAExtension fext{F, phi.aa_order};
  rec.phase_value = aa::value(fext, cp.point);
  rec.top_coefficient = std::pow(2.0 * std::numbers::pi, 0.5 * (n + N)) * amp_at(phi, amp.a, cp.point) *
                        amp_at(phi, in.u, cp.point) * amp_at(phi, in.window, cp.point) *
                        rec.sqrt_dphi.value;

  std::vector<oracle::Interval> box = in.x_box;
  if (box.empty()) {
    for (int k = 0; k < n; ++k) {
      box.push_back({phi.patch.x_lo[static_cast<size_t>(k)], phi.patch.x_hi[static_cast<size_t>(k)]});
    }
  }
  if (static_cast<int>(box.size()) != n) throw ValidationError("x box dimension must equal n");
  box.insert(box.end(), in.eta_box.begin(), in.eta_box.end());
  std::vector<int> axes(static_cast<size_t>(n + N));
  std::iota(axes.begin(), axes.end(), 0);
  const std::vector<cplx> origin(static_cast<size_t>(n + N));

  for (double t : in.t_grid) {
    std::vector<Expr> sub;
    for (int k = 0; k < n + N; ++k) {
      const Expr v = expr::variable(phi.layout, k);
      sub.push_back(k < n ? v : expr::mul(expr::constant(t), v));
    }
    const Expr a_t = expr::substitute(amp.a, sub);
    const Expr integrand = expr::mul(expr::constant(std::pow(t, N)), expr::mul(a_t, expr::mul(in.u, in.window)));
    const auto q = oracle::osc_integral(F, integrand, axes, box, t, origin, in.quad);
    const cplx pred = std::pow(t, rec.predicted_exponent) * std::exp(cplx(0.0, t) * rec.phase_value) *
                      rec.top_coefficient;
    rec.t.push_back(t);
    rec.oracle.push_back(q.value);
    rec.predicted.push_back(pred);
    rec.rel_error.push_back(std::abs(q.value - pred) / std::max(std::abs(pred), 1e-300));
  }
  if (rec.t.size() >= 4) {
    std::vector<double> mag;
    for (const auto& v : rec.oracle) mag.push_back(std::abs(v));
    try {
      rec.fit = oracle::fit_order(rec.t, mag);
      rec.fitted = true;
    } catch (const ConvergenceError&) {
      rec.fitted = false;
    }
  }
  return rec;
}

cplx transition_identity(const SqrtDPhi& s1, const SqrtDPhi& s2) {
  const cplx r = s1.value / s2.value;
  return r * r * s1.det / s2.det;
}

}  // namespace fiocalc::symbol
