// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/compose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fiocalc/branch.hpp"
#include "fiocalc/jet.hpp"
#include "fiocalc/parallel.hpp"

namespace fiocalc::compose {

namespace {

using expr::Func;
using expr::VarGroup;

std::vector<int> iota(int begin, int count) {
  std::vector<int> v(static_cast<size_t>(count));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

std::uint64_t mask_of(const std::vector<int>& vars) {
  std::uint64_t m = 0;
  for (int v : vars) m |= std::uint64_t{1} << v;
  return m;
}

// Flattens a product/quotient into factors; `inverted` marks divisors.
void factors(const Expr& e, bool inverted, std::vector<std::pair<Expr, bool>>* out) {
  if (e->kind == expr::Kind::kMul) {
    factors(e->args[0], inverted, out);
    factors(e->args[1], inverted, out);
  } else if (e->kind == expr::Kind::kDiv) {
    factors(e->args[0], inverted, out);
    factors(e->args[1], !inverted, out);
  } else {
    out->emplace_back(e, inverted);
  }
}

Expr product(const std::vector<std::pair<Expr, bool>>& fs) {
  Expr num = expr::constant(1.0);
  Expr den = expr::constant(1.0);
  bool has_den = false;
  for (const auto& [f, inv] : fs) {
    if (inv) {
      den = expr::mul(den, f);
      has_den = true;
    } else {
      num = expr::mul(num, f);
    }
  }
  return has_den ? expr::div(num, den) : num;
}

// Number of widths kept on each side of a Gaussian cutoff.
constexpr double kGaussianSpan = 4.5;
constexpr int kOuterOnlyPanels = 8;

Expr gaussian_around(const VarLayout& layout, const std::vector<int>& vars,
                     const std::vector<double>& center, double width) {
  if (vars.empty()) return expr::constant(1.0);
  Expr q = expr::constant(0.0);
  for (size_t k = 0; k < vars.size(); ++k) {
    const Expr d = expr::sub(expr::variable(layout, vars[k]), expr::constant(center[k]));
    q = expr::add(q, expr::pow(d, expr::constant(2.0)));
  }
  return expr::call(Func::kExp, {expr::mul(expr::constant(-0.5 / (width * width)), q)});
}

std::vector<int> whole_panels(std::vector<int> n) {
  for (int& v : n) v = std::max(1, (v + oracle::kPanelNodes - 1) / oracle::kPanelNodes) * oracle::kPanelNodes;
  return n;
}

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

// Neumaier summation keeps the outer sum independent of cancellation order.
struct Accumulator {
  cplx sum{};
  cplx comp{};
  void add(cplx v) {
    auto step = [](double& s, double& c, double x) {
      const double t = s + x;
      if (std::abs(s) >= std::abs(x)) {
        c += (s - t) + x;
      } else {
        c += (x - t) + s;
      }
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    step(sr, cr, v.real());
    step(si, ci, v.imag());
    sum = cplx(sr, si);
    comp = cplx(cr, ci);
  }
  cplx value() const { return sum + comp; }
};

}  // namespace

OperatorKernel make_kernel(int which, const std::string& phase_src, const std::string& amplitude,
                           double degree, int n_left, int n_right, int N) {
  if (which != 1 && which != 2) throw ValidationError("kernel index must be 1 or 2");
  if (n_left < 1 || n_right < 1 || N < 1) throw ValidationError("kernel dimensions must be >= 1");
  OperatorKernel k;
  k.layout = which == 1 ? VarLayout({{"x", n_left, false}, {"y", n_right, false}, {"theta", N, true}})
                        : VarLayout({{"y", n_left, false}, {"z", n_right, false}, {"sigma", N, true}});
  k.phase = expr::parse(phase_src, k.layout);
  k.amplitude = expr::parse(amplitude, k.layout);
  k.degree = degree;
  k.n_left = n_left;
  k.n_right = n_right;
  k.N = N;
  k.order = degree - 0.25 * (n_left + n_right - 2.0 * N);
  return k;
}

std::vector<cplx> CompositionPlan::to_omega(const std::vector<cplx>& p) const {
  const int f0 = nX + nZ + nY;
  double r2 = 0.0;
  for (int k = f0; k < f0 + N1 + N2; ++k) r2 += std::norm(p[static_cast<size_t>(k)]);
  std::vector<cplx> q = p;
  for (int k = nX + nZ; k < f0; ++k) q[static_cast<size_t>(k)] *= std::sqrt(r2);
  return q;
}

std::vector<cplx> CompositionPlan::from_omega(const std::vector<cplx>& q) const {
  const int f0 = nX + nZ + nY;
  double r2 = 0.0;
  for (int k = f0; k < f0 + N1 + N2; ++k) r2 += std::norm(q[static_cast<size_t>(k)]);
  std::vector<cplx> p = q;
  for (int k = nX + nZ; k < f0; ++k) p[static_cast<size_t>(k)] /= std::sqrt(r2);
  return p;
}

CompositionPlan build_composed_phase(const OperatorKernel& k1, const OperatorKernel& k2,
                                     const std::vector<double>& seed, int samples) {
  if (k1.n_right != k2.n_left) {
    throw ValidationError("y dimensions differ: " + std::to_string(k1.n_right) + " vs " +
                          std::to_string(k2.n_left));
  }
  CompositionPlan plan;
  plan.k1 = k1;
  plan.k2 = k2;
  plan.nX = k1.n_left;
  plan.nY = k1.n_right;
  plan.nZ = k2.n_right;
  plan.N1 = k1.N;
  plan.N2 = k2.N;
  const int nX = plan.nX, nY = plan.nY, nZ = plan.nZ, N1 = plan.N1, N2 = plan.N2;
  const int dim = nX + nZ + nY + N1 + N2;
  if (dim > 64) throw ValidationError("composed problem has more than 64 variables");
  if (static_cast<int>(seed.size()) != dim) throw ValidationError("composition seed has the wrong dimension");
  plan.layout = VarLayout({{"x", nX, false}, {"z", nZ, false}, {"y", nY, false},
                           {"theta", N1, true}, {"sigma", N2, true}});
  const int ox = 0, oz = nX, oy = nX + nZ, ot = nX + nZ + nY, os = ot + N1;
  std::vector<int> map1;
  for (int k = 0; k < nX; ++k) map1.push_back(ox + k);
  for (int k = 0; k < nY; ++k) map1.push_back(oy + k);
  for (int k = 0; k < N1; ++k) map1.push_back(ot + k);
  std::vector<int> map2;
  for (int k = 0; k < nY; ++k) map2.push_back(oy + k);
  for (int k = 0; k < nZ; ++k) map2.push_back(oz + k);
  for (int k = 0; k < N2; ++k) map2.push_back(os + k);
  plan.phi1 = expr::remap(k1.phase, map1, plan.layout);
  plan.phi2 = expr::remap(k2.phase, map2, plan.layout);
  plan.a1 = expr::remap(k1.amplitude, map1, plan.layout);
  plan.a2 = expr::remap(k2.amplitude, map2, plan.layout);
  plan.Phi = expr::add(plan.phi1, plan.phi2);
  plan.a12 = expr::mul(plan.a1, plan.a2);

  const VarLayout omega({{"x", nX, false}, {"z", nZ, false}, {"omega", nY, true},
                         {"theta", N1, true}, {"sigma", N2, true}});
  std::vector<Expr> freq;
  for (int k = ot; k < dim; ++k) freq.push_back(expr::variable(omega, k));
  const Expr r = expr::call(Func::kNorm, freq);
  std::vector<Expr> sub;
  for (int k = 0; k < dim; ++k) {
    const Expr v = expr::variable(omega, k);
    sub.push_back(k >= oy && k < ot ? expr::div(v, r) : v);
  }
  phase::ConicPatch patch;
  for (int k = 0; k < nX + nZ; ++k) {
    patch.x_lo.push_back(seed[static_cast<size_t>(k)] - 0.5);
    patch.x_hi.push_back(seed[static_cast<size_t>(k)] + 0.5);
  }
  std::vector<cplx> seed_c(seed.begin(), seed.end());
  const auto q = plan.to_omega(seed_c);
  for (int k = oy; k < dim; ++k) patch.direction.push_back(q[static_cast<size_t>(k)].real());
  patch.angle = 0.2;
  plan.Phi_omega = phase::make_phase(expr::substitute(plan.Phi, sub), omega, patch);

  phase::ValidateOptions vo;
  vo.samples = samples;
  const auto rep = phase::validate_phase(plan.Phi_omega, vo);
  plan.euler_residual = rep.max_euler_residual;
  plan.min_im_Phi = rep.min_im_phi;
  if (!rep.homogeneous) {
    throw ValidationError("composed phase is not homogeneous of degree 1 (Euler residual " +
                          std::to_string(rep.max_euler_residual) + ")");
  }
  const Expr b = expr::mul(expr::substitute(plan.a12, sub), expr::pow(r, expr::constant(-static_cast<double>(nY))));
  plan.b = symbol::make_amplitude(plan.Phi_omega, b, k1.degree + k2.degree - nY);
  return plan;
}

ExcessReport intersection_excess(const CompositionPlan& plan, const std::vector<double>& seed,
                                 int samples, std::uint64_t rng_seed, double spread) {
  const auto& Phi = plan.Phi_omega;
  if (static_cast<int>(seed.size()) != Phi.n + Phi.N) {
    throw ValidationError("composition seed has the wrong dimension");
  }
  ExcessReport rep;
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < std::max(samples, 1); ++s) {
    std::vector<cplx> p(seed.begin(), seed.end());
    if (s > 0) {
      for (auto& v : p) v += spread * gauss(rng);
    }
    const auto q = plan.to_omega(p);
    std::vector<double> xs, th;
    for (int k = 0; k < Phi.n; ++k) xs.push_back(q[static_cast<size_t>(k)].real());
    for (int k = Phi.n; k < Phi.n + Phi.N; ++k) th.push_back(q[static_cast<size_t>(k)].real());
    // Perturbed seeds reuse the chart chosen at the base point.
    phase::CriticalOptions co;
    if (s > 0) {
      co.unknowns = rep.base.unknowns;
      co.equations = rep.base.equations;
    }
    const auto cp = phase::find_critical(Phi, th, xs, co);
    if (!cp.real) throw ConvergenceError("stationary point of the composed phase is not real");
    if (s == 0) rep.base = cp;
    rep.samples.push_back(cp.point);
  }
  rep.cls = phase::classify(Phi, rep.samples);
  if (rep.cls.kind == phase::Kind::kDegenerateInvalid) {
    throw ValidationError("not clean: the rank of the defining differentials varies across stationary points");
  }
  rep.n_omega = Phi.N;
  rep.rank = rep.cls.M;
  rep.excess = rep.cls.excess;
  rep.tangent_dim = plan.nX + plan.nZ + rep.excess;
  return rep;
}

double composed_order(double m1, double m2, int e) { return m1 + m2 + 0.5 * e; }

namespace {

ComposedSymbol symbol_shell(const CompositionPlan& plan, const ExcessReport& ex) {
  ComposedSymbol cs;
  cs.composed_order = composed_order(plan.k1.order, plan.k2.order, ex.excess);
  cs.grade = plan.k1.order + plan.k2.order - 0.5 * ex.excess + 0.25 * (plan.nX + plan.nZ);
  const int f0 = plan.nX + plan.nZ + plan.nY;
  double r2 = 0.0;
  for (int k = f0; k < f0 + plan.N1 + plan.N2; ++k) r2 += std::norm(ex.base.point[static_cast<size_t>(k)]);
  int y_excess = 0;
  for (int j : ex.cls.theta_excess) y_excess += j < plan.nY ? 1 : 0;
  cs.fiber_jacobian = std::pow(std::sqrt(r2), y_excess);
  return cs;
}

}  // namespace

ComposedSymbol composed_symbol_transverse(const CompositionPlan& plan, const ExcessReport& ex,
                                          double lambda) {
  if (ex.excess != 0) throw ValidationError("the transverse formula needs excess 0");
  const auto& Phi = plan.Phi_omega;
  ComposedSymbol cs = symbol_shell(plan, ex);
  cs.path = "transverse";
  const auto psi = symbol::make_psi(Phi, ex.base, lambda);
  const auto all = iota(0, Phi.n + Phi.N);
  symbol::SqrtDPhi s;
  s.vars = all;
  s.hessian = jets::hessian(Phi.expr, ex.base.point, all);
  for (int k = 0; k < Phi.n; ++k) s.hessian(k, k) += lambda;
  s.branch = branch::branched_inv_sqrt_det(s.hessian);
  s.matrix = s.branch.a;
  s.det = s.branch.det_a;
  s.value = s.branch.value;
  s.grade = 0.5 * Phi.N;
  auto& v = cs.value;
  v.excess = 0;
  v.order = symbol::order_of(Phi, plan.b.degree);
  v.grade = v.order + 0.25 * Phi.n;
  v.value_exponent = v.order - 0.25 * Phi.n;
  v.x.assign(ex.base.point.begin(), ex.base.point.begin() + Phi.n);
  v.xi = phase::x_gradient(Phi, ex.base.point);
  v.amplitude = expr::eval(plan.b.a, ex.base.point);
  v.sqrt_dphi = s;
  v.value = v.amplitude * s.value;
  return cs;
}

ComposedSymbol composed_symbol_clean(const CompositionPlan& plan, const ExcessReport& ex,
                                     const std::vector<oracle::Interval>& fiber_box, double lambda) {
  ComposedSymbol cs = symbol_shell(plan, ex);
  cs.path = "clean";
  const auto psi = symbol::make_psi(plan.Phi_omega, ex.base, lambda);
  symbol::FiberOptions fo;
  fo.box = fiber_box;
  fo.quadrature_for_point = true;
  cs.value = symbol::principal_symbol(plan.Phi_omega, plan.b, ex.cls, ex.base, psi, fo);
  return cs;
}

std::vector<oracle::Interval> fiber_box_to_omega(const CompositionPlan& plan, const ExcessReport& ex,
                                                 const std::vector<oracle::Interval>& box) {
  if (box.size() != ex.cls.theta_excess.size()) {
    throw ValidationError("fiber box needs one interval per excess variable");
  }
  const int f0 = plan.nX + plan.nZ + plan.nY;
  double r2 = 0.0;
  for (int k = f0; k < f0 + plan.N1 + plan.N2; ++k) r2 += std::norm(ex.base.point[static_cast<size_t>(k)]);
  std::vector<oracle::Interval> out = box;
  for (size_t a = 0; a < box.size(); ++a) {
    if (ex.cls.theta_excess[a] < plan.nY) {
      out[a].lo *= std::sqrt(r2);
      out[a].hi *= std::sqrt(r2);
    }
  }
  return out;
}

OracleInputs default_oracle_inputs(const CompositionPlan& plan, const ExcessReport& ex,
                                   double lambda, double radius, double window) {
  const auto& L = plan.layout;
  const auto psi = symbol::make_psi(plan.Phi_omega, ex.base, lambda);
  std::vector<cplx> p = plan.from_omega(ex.base.point);
  OracleInputs in;
  auto quad_psi = [&](int begin, int count) {
    Expr acc = expr::constant(0.0);
    for (int k = begin; k < begin + count; ++k) {
      const Expr d = expr::sub(expr::variable(L, k), expr::constant(psi.x0[static_cast<size_t>(k)]));
      acc = expr::add(acc, expr::mul(expr::constant(psi.xi0[static_cast<size_t>(k)]), d));
      acc = expr::sub(acc, expr::mul(expr::constant(0.5 * lambda), expr::pow(d, expr::constant(2.0))));
    }
    return acc;
  };
  in.psi_x = quad_psi(0, plan.nX);
  in.psi_z = quad_psi(plan.nX, plan.nZ);
  const auto xs = iota(0, plan.nX);
  const auto zs = iota(plan.nX, plan.nZ);
  in.u_x = gaussian_around(L, xs, std::vector<double>(psi.x0.begin(), psi.x0.begin() + plan.nX), radius);
  in.u_z = gaussian_around(L, zs, std::vector<double>(psi.x0.begin() + plan.nX, psi.x0.end()), radius);
  const double span = kGaussianSpan * radius;
  for (int k = 0; k < plan.nX + plan.nZ; ++k) {
    const double c = psi.x0[static_cast<size_t>(k)];
    (k < plan.nX ? in.x_box : in.z_box).push_back({c - span, c + span});
  }
  for (int k = 0; k < plan.nY; ++k) {
    const double y0 = p[static_cast<size_t>(plan.nX + plan.nZ + k)].real();
    in.y_box.push_back({y0 - span - 0.5, y0 + span + 0.5});
  }
  const int ot = plan.nX + plan.nZ + plan.nY;
  auto freq_part = [&](int begin, int count, Expr* win, std::vector<oracle::Interval>* box) {
    double nrm = 0.0;
    for (int k = begin; k < begin + count; ++k) nrm += std::norm(p[static_cast<size_t>(k)]);
    nrm = std::sqrt(nrm);
    const double rho = window * nrm;
    const double half = kGaussianSpan * rho;
    std::vector<int> vars;
    std::vector<double> center;
    for (int k = begin; k < begin + count; ++k) {
      const int j = k - (plan.nX + plan.nZ);  // index within the omega frequency group
      const bool excess = std::find(ex.cls.theta_excess.begin(), ex.cls.theta_excess.end(), j) !=
                          ex.cls.theta_excess.end();
      const double c = p[static_cast<size_t>(k)].real();
      if (excess) {
        box->push_back({-2.0 * nrm, 2.0 * nrm});
      } else {
        vars.push_back(k);
        center.push_back(c);
        box->push_back({c - half, c + half});
      }
    }
    *win = gaussian_around(L, vars, center, rho);
  };
  freq_part(ot, plan.N1, &in.window1, &in.theta_box);
  freq_part(ot + plan.N1, plan.N2, &in.window2, &in.sigma_box);
  return in;
}

PairingSample compose_kernels_oracle(const CompositionPlan& plan, const OracleInputs& in, double t) {
  const auto& L = plan.layout;
  const int nX = plan.nX, nY = plan.nY, nZ = plan.nZ, N1 = plan.N1, N2 = plan.N2;
  const int dim = L.dim();
  const int ox = 0, oz = nX, oy = nX + nZ, ot = oy + nY, os = ot + N1;
  if (static_cast<int>(in.x_box.size()) != nX || static_cast<int>(in.z_box.size()) != nZ ||
      static_cast<int>(in.y_box.size()) != nY || static_cast<int>(in.theta_box.size()) != N1 ||
      static_cast<int>(in.sigma_box.size()) != N2) {
    throw ValidationError("oracle boxes do not match the composed dimensions");
  }
  const auto y_axes = iota(oy, nY);
  const std::uint64_t ymask = mask_of(y_axes);

  // Frequencies are integrated in the scaled variables theta = t eta.
  std::vector<Expr> scale;
  for (int k = 0; k < dim; ++k) {
    const Expr v = expr::variable(L, k);
    scale.push_back(k >= ot ? expr::mul(expr::constant(t), v) : v);
  }
  Expr outer = expr::constant(1.0);
  auto split = [&](const Expr& a) {
    std::vector<std::pair<Expr, bool>> fs;
    factors(expr::substitute(a, scale), false, &fs);
    std::vector<std::pair<Expr, bool>> in_f, out_f;
    for (const auto& f : fs) {
      const std::uint64_t d = expr::dependencies(f.first);
      ((d & ~ymask) == 0 && d != 0 ? out_f : in_f).push_back(f);
    }
    if (!out_f.empty()) outer = expr::mul(outer, product(out_f));
    return product(in_f);
  };
  const Expr it = expr::constant(cplx(0.0, t));
  const Expr g1 = expr::mul(expr::call(Func::kExp, {expr::mul(it, expr::sub(plan.phi1, in.psi_x))}),
                            expr::mul(split(plan.a1), expr::mul(in.u_x, in.window1)));
  const Expr g2 = expr::mul(expr::call(Func::kExp, {expr::mul(it, expr::sub(plan.phi2, in.psi_z))}),
                            expr::mul(split(plan.a2), expr::mul(in.u_z, in.window2)));

  struct Inner {
    Expr integrand;
    Expr phase;
    std::vector<int> axes;
    std::vector<oracle::Interval> box;
    std::vector<int> dep;  // positions within y_axes the integral depends on
    std::vector<int> base_nodes;
  };
  Inner inner[2];
  inner[0].integrand = g1;
  inner[0].phase = expr::sub(plan.phi1, in.psi_x);
  inner[0].axes = iota(ox, nX);
  for (int k : iota(ot, N1)) inner[0].axes.push_back(k);
  inner[0].box = in.x_box;
  inner[0].box.insert(inner[0].box.end(), in.theta_box.begin(), in.theta_box.end());
  inner[1].integrand = g2;
  inner[1].phase = expr::sub(plan.phi2, in.psi_z);
  inner[1].axes = iota(oz, nZ);
  for (int k : iota(os, N2)) inner[1].axes.push_back(k);
  inner[1].box = in.z_box;
  inner[1].box.insert(inner[1].box.end(), in.sigma_box.begin(), in.sigma_box.end());

  oracle::QuadOptions qo;
  qo.c = in.c;
  // Coarse y samples: the box corners and center.
  std::vector<std::vector<cplx>> ypts;
  {
    const int g = 3;
    long long total = 1;
    for (int a = 0; a < nY; ++a) total *= g;
    for (long long flat = 0; flat < total; ++flat) {
      std::vector<cplx> p(static_cast<size_t>(dim));
      long long r = flat;
      for (int a = 0; a < nY; ++a) {
        const auto& iv = in.y_box[static_cast<size_t>(a)];
        p[static_cast<size_t>(oy + a)] = iv.lo + iv.length() * static_cast<double>(r % g) / (g - 1);
        r /= g;
      }
      ypts.push_back(p);
    }
  }
  for (auto& inn : inner) {
    const std::uint64_t d = expr::dependencies(inn.integrand) & ymask;
    for (int a = 0; a < nY; ++a) {
      if (d & (std::uint64_t{1} << (oy + a))) inn.dep.push_back(a);
    }
    std::vector<double> var(inn.axes.size(), 0.0);
    for (const auto& p : ypts) {
      const auto v = oracle::phase_variation(inn.phase, inn.axes, inn.box, t, p);
      for (size_t a = 0; a < var.size(); ++a) var[a] = std::max(var[a], v[a]);
    }
    inn.base_nodes = whole_panels(oracle::initial_nodes(var, qo));
  }
  // Outer nodes follow the y oscillation of each factor on its own.
  std::vector<int> outer_base(static_cast<size_t>(nY), oracle::kPanelNodes);
  {
    std::vector<double> var(static_cast<size_t>(nY), 0.0);
    for (int which = 0; which < 2; ++which) {
      const auto& inn = inner[which];
      const Expr ph = which == 0 ? plan.phi1 : plan.phi2;
      // Corners of the inner box, y at the center.
      const size_t na = inn.axes.size();
      for (long long flat = 0; flat < (1LL << na); ++flat) {
        std::vector<cplx> p(static_cast<size_t>(dim));
        for (size_t a = 0; a < na; ++a) {
          const auto& iv = inn.box[a];
          p[static_cast<size_t>(inn.axes[a])] = (flat >> a) & 1 ? iv.hi : iv.lo;
        }
        const auto v = oracle::phase_variation(ph, y_axes, in.y_box, t, p);
        for (int a = 0; a < nY; ++a) var[static_cast<size_t>(a)] = std::max(var[static_cast<size_t>(a)], v[static_cast<size_t>(a)]);
      }
    }
    outer_base = whole_panels(oracle::initial_nodes(var, qo));
  }
  // Axes no inner integral depends on only cost outer sums; y-only cutoffs
  // such as bump(y2) need several panels there.
  for (int a = 0; a < nY; ++a) {
    const bool used = std::find(inner[0].dep.begin(), inner[0].dep.end(), a) != inner[0].dep.end() ||
                      std::find(inner[1].dep.begin(), inner[1].dep.end(), a) != inner[1].dep.end();
    auto& nb = outer_base[static_cast<size_t>(a)];
    if (!used) nb = std::max(nb, kOuterOnlyPanels * oracle::kPanelNodes);
  }

  const expr::Program p_outer(outer, dim);
  const expr::Program p_inner[2] = {expr::Program(inner[0].integrand, dim), expr::Program(inner[1].integrand, dim)};

  PairingSample out;
  out.t = t;
  cplx prev{};
  for (int level = 0;; ++level) {
    const int mult = 1 << level;
    std::vector<int> on(static_cast<size_t>(nY));
    double est = 1.0;
    for (int a = 0; a < nY; ++a) on[static_cast<size_t>(a)] = outer_base[static_cast<size_t>(a)] * mult;
    std::vector<int> in_nodes[2];
    for (int w = 0; w < 2; ++w) {
      double cnt = 1.0;
      for (int nb : inner[w].base_nodes) {
        in_nodes[w].push_back(nb * mult);
        cnt *= nb * mult;
      }
      double memo = 1.0;
      for (int a : inner[w].dep) memo *= on[static_cast<size_t>(a)];
      est += cnt * memo;
    }
    if (out.points + est > in.max_points) {
      throw QuadratureError("quadrature budget exceeded in the composition oracle (last change " +
                            std::to_string(out.change) + ")");
    }
    std::vector<std::vector<double>> yx(static_cast<size_t>(nY)), yw(static_cast<size_t>(nY));
    for (int a = 0; a < nY; ++a) {
      composite_rule(in.y_box[static_cast<size_t>(a)], on[static_cast<size_t>(a)], yx[static_cast<size_t>(a)],
                     yw[static_cast<size_t>(a)]);
    }
    // Inner integrals, one per value of the y variables they depend on.
    std::vector<cplx> memo[2];
    for (int w = 0; w < 2; ++w) {
      const auto& dep = inner[w].dep;
      long long total = 1;
      for (int a : dep) total *= on[static_cast<size_t>(a)];
      memo[w].assign(static_cast<size_t>(total), cplx{});
      std::vector<double> pts(static_cast<size_t>(total), 0.0);
      parallel_for(static_cast<int>(total), [&](int flat) {
        std::vector<cplx> point(static_cast<size_t>(dim));
        long long r = flat;
        for (int a : dep) {
          const int n = on[static_cast<size_t>(a)];
          point[static_cast<size_t>(oy + a)] = yx[static_cast<size_t>(a)][static_cast<size_t>(r % n)];
          r /= n;
        }
        memo[w][static_cast<size_t>(flat)] =
            oracle::tensor_sum(p_inner[w], inner[w].axes, inner[w].box, in_nodes[w], point,
                               &pts[static_cast<size_t>(flat)]);
      });
      for (double v : pts) out.points += v;
    }
    // Outer tensor sum over y.
    long long total = 1;
    for (int a = 0; a < nY; ++a) total *= on[static_cast<size_t>(a)];
    Accumulator acc;
    std::vector<cplx> point(static_cast<size_t>(dim));
    std::vector<int> idx(static_cast<size_t>(nY));
    for (long long flat = 0; flat < total; ++flat) {
      long long r = flat;
      double w = 1.0;
      for (int a = 0; a < nY; ++a) {
        const int n = on[static_cast<size_t>(a)];
        idx[static_cast<size_t>(a)] = static_cast<int>(r % n);
        r /= n;
        point[static_cast<size_t>(oy + a)] = yx[static_cast<size_t>(a)][static_cast<size_t>(idx[static_cast<size_t>(a)])];
        w *= yw[static_cast<size_t>(a)][static_cast<size_t>(idx[static_cast<size_t>(a)])];
      }
      cplx v = w * p_outer(point);
      for (int k = 0; k < 2; ++k) {
        long long key = 0;
        long long stride = 1;
        for (int a : inner[k].dep) {
          key += stride * idx[static_cast<size_t>(a)];
          stride *= on[static_cast<size_t>(a)];
        }
        v *= memo[k][static_cast<size_t>(key)];
      }
      acc.add(v);
    }
    out.points += static_cast<double>(total);
    const cplx val = std::pow(t, N1 + N2) * acc.value();
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
      throw QuadratureError("composition oracle produced a non-finite value");
    }
    out.levels = level + 1;
    out.outer_nodes = on;
    out.inner1_nodes = in_nodes[0];
    out.inner2_nodes = in_nodes[1];
    if (level > 0) {
      out.change = std::abs(val - prev);
      if (out.change <= in.rtol * std::abs(val) || out.change <= in.atol) {
        out.value = val;
        return out;
      }
    }
    prev = val;
  }
}

OrderReport composed_order_fit(const CompositionPlan& plan, const ExcessReport& ex,
                               const OracleInputs& in, const std::vector<double>& t_grid) {
  OrderReport rep;
  std::vector<double> mag;
  for (double t : t_grid) {
    rep.samples.push_back(compose_kernels_oracle(plan, in, t));
    mag.push_back(std::abs(rep.samples.back().value));
  }
  rep.fit = oracle::fit_order(t_grid, mag);
  rep.fitted_order = rep.fit.slope + 0.25 * (plan.nX + plan.nZ);
  rep.predicted_order = composed_order(plan.k1.order, plan.k2.order, ex.excess);
  return rep;
}

}  // namespace fiocalc::compose
