// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/phase.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "fiocalc/jet.hpp"

namespace fiocalc::phase {

namespace {

bool is_real(const std::vector<cplx>& z) {
  return std::all_of(z.begin(), z.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

std::vector<int> iota(int begin, int count) {
  std::vector<int> v(static_cast<size_t>(count));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

double max_abs(const linalg::CVector& v) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) m = std::max(m, std::abs(v(k)));
  return m;
}

void normalize_patch(ConicPatch& p, int n, int N) {
  if (p.x_lo.empty()) p.x_lo.assign(static_cast<size_t>(n), -1.0);
  if (p.x_hi.empty()) p.x_hi.assign(static_cast<size_t>(n), 1.0);
  if (static_cast<int>(p.x_lo.size()) != n || static_cast<int>(p.x_hi.size()) != n) {
    throw ValidationError("patch x-box dimension does not match the base dimension");
  }
  for (int k = 0; k < n; ++k) {
    if (!(p.x_lo[static_cast<size_t>(k)] <= p.x_hi[static_cast<size_t>(k)])) {
      throw ValidationError("patch x-box is empty");
    }
  }
  if (p.direction.empty()) {
    p.direction.assign(static_cast<size_t>(N), 0.0);
    if (N > 0) p.direction[0] = 1.0;
  }
  if (static_cast<int>(p.direction.size()) != N) {
    throw ValidationError("patch direction dimension does not match the frequency dimension");
  }
  double s = 0.0;
  for (double d : p.direction) s += d * d;
  if (N > 0) {
    if (s == 0.0) throw ValidationError("patch direction is zero");
    for (double& d : p.direction) d /= std::sqrt(s);
  }
  if (!(p.r_lo > 0.0 && p.r_lo <= p.r_hi)) throw ValidationError("patch radial interval is empty");
  if (!(p.angle >= 0.0)) throw ValidationError("patch angle must be >= 0");
}

// Gradient and Hessian of phi~ in all variables at a point.
aa::Derivatives full_derivatives(const PhaseFunction& phi, const std::vector<cplx>& z, int m) {
  if (is_real(z)) {
    aa::Derivatives d;
    const auto all = iota(0, phi.n + phi.N);
    d.value = expr::eval(phi.expr, z);
    if (m >= 1) d.grad = linalg::to_eigen(jets::gradient(phi.expr, z, all));
    if (m >= 2) d.hess = jets::hessian(phi.expr, z, all);
    return d;
  }
  return aa::derivatives(phi.expr, phi.aa_order, z, iota(0, phi.n + phi.N), m);
}

// Damped Newton on G(u) = 0. `system` fills the residual and Jacobian.
struct NewtonOut {
  std::vector<cplx> u;
  double residual = 0.0;
  int iterations = 0;
};

using System = std::function<void(const std::vector<cplx>&, linalg::CVector&, CMatrix&)>;

NewtonOut newton(const System& system, std::vector<cplx> u, double tol, int max_iter,
                 const char* what) {
  linalg::CVector g;
  CMatrix J;
  system(u, g, J);
  double res = max_abs(g);
  int it = 0;
  while (res > tol) {
    if (it >= max_iter) {
      throw ConvergenceError(std::string(what) + ": no convergence in " + std::to_string(max_iter) +
                             " iterations (residual " + std::to_string(res) + ")");
    }
    ++it;
    const auto info = linalg::rank(J);
    if (info.rank < J.cols()) throw ConvergenceError(std::string(what) + ": rank collapse at iterate");
    const linalg::CVector step = linalg::solve(J, g);
    double lambda = 1.0;
    std::vector<cplx> trial(u.size());
    linalg::CVector gt;
    CMatrix Jt;
    for (;;) {
      for (size_t k = 0; k < u.size(); ++k) trial[k] = u[k] - lambda * step(static_cast<Eigen::Index>(k));
      system(trial, gt, Jt);
      const double rt = max_abs(gt);
      if (std::isfinite(rt) && (rt < res || lambda < 1e-4)) {
        u = trial;
        g = gt;
        J = Jt;
        res = rt;
        break;
      }
      lambda *= 0.5;
    }
  }
  // One polishing step, kept only if it helps.
  if (res > 0.0 && linalg::rank(J).rank == J.cols()) {
    const linalg::CVector step = linalg::solve(J, g);
    std::vector<cplx> trial(u.size());
    for (size_t k = 0; k < u.size(); ++k) trial[k] = u[k] - step(static_cast<Eigen::Index>(k));
    linalg::CVector gt;
    CMatrix Jt;
    system(trial, gt, Jt);
    if (max_abs(gt) < res) {
      u = trial;
      res = max_abs(gt);
    }
  }
  return {u, res, it};
}

}  // namespace

PhaseFunction make_phase(const std::string& source, int n, int N, ConicPatch patch,
                         const std::string& base_group, const std::string& freq_group) {
  if (n < 1 || N < 0) throw ValidationError("phase dimensions must satisfy n >= 1, N >= 0");
  std::vector<expr::VarGroup> groups{{base_group, n, false}};
  if (N > 0) groups.push_back({freq_group, N, true});
  VarLayout layout(groups);
  return make_phase(expr::parse(source, layout), layout, std::move(patch));
}

PhaseFunction make_phase(Expr e, VarLayout layout, ConicPatch patch) {
  PhaseFunction phi;
  phi.expr = std::move(e);
  phi.layout = std::move(layout);
  bool seen_freq = false;
  for (int k = 0; k < phi.layout.dim(); ++k) {
    if (phi.layout.is_frequency(k)) {
      seen_freq = true;
      ++phi.N;
    } else {
      if (seen_freq) throw ValidationError("base variables must precede frequency variables");
      ++phi.n;
    }
  }
  normalize_patch(patch, phi.n, phi.N);
  phi.patch = std::move(patch);
  return phi;
}

std::vector<std::vector<double>> sample_patch(const PhaseFunction& phi, int count,
                                              std::uint64_t seed) {
  const ConicPatch& p = phi.patch;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int s = 0; s < count; ++s) {
    std::vector<double> z(static_cast<size_t>(phi.n + phi.N));
    for (int k = 0; k < phi.n; ++k) {
      const double lo = p.x_lo[static_cast<size_t>(k)];
      const double hi = p.x_hi[static_cast<size_t>(k)];
      z[static_cast<size_t>(k)] = s == 0 ? 0.5 * (lo + hi) : lo + (hi - lo) * unif(rng);
    }
    if (phi.N > 0) {
      std::vector<double> w(static_cast<size_t>(phi.N), 0.0);
      double alpha = 0.0;
      double r = std::sqrt(p.r_lo * p.r_hi);
      if (s > 0) {
        double dot = 0.0;
        for (auto& v : w) v = gauss(rng);
        for (int k = 0; k < phi.N; ++k) dot += w[static_cast<size_t>(k)] * p.direction[static_cast<size_t>(k)];
        double nw = 0.0;
        for (int k = 0; k < phi.N; ++k) {
          w[static_cast<size_t>(k)] -= dot * p.direction[static_cast<size_t>(k)];
          nw += w[static_cast<size_t>(k)] * w[static_cast<size_t>(k)];
        }
        nw = std::sqrt(nw);
        if (nw > 0.0) {
          for (auto& v : w) v /= nw;
          alpha = p.angle * unif(rng);
        }
        r = p.r_lo * std::pow(p.r_hi / p.r_lo, unif(rng));
      }
      for (int k = 0; k < phi.N; ++k) {
        z[static_cast<size_t>(phi.n + k)] =
            r * (std::cos(alpha) * p.direction[static_cast<size_t>(k)] + std::sin(alpha) * w[static_cast<size_t>(k)]);
      }
    }
    out.push_back(std::move(z));
  }
  return out;
}

double euler_residual(const Expr& e, const std::vector<int>& freq, double degree,
                      const std::vector<std::vector<double>>& points) {
  double worst = 0.0;
  for (const auto& pt : points) {
    const std::vector<cplx> z(pt.begin(), pt.end());
    const auto g = jets::gradient(e, z, freq);
    const cplx f = expr::eval(e, z);
    cplx euler = -degree * f;
    for (size_t k = 0; k < freq.size(); ++k) euler += z[static_cast<size_t>(freq[k])] * g[k];
    worst = std::max(worst, std::abs(euler) / (1.0 + std::abs(f)));
  }
  return worst;
}

PhaseReport validate_phase(const PhaseFunction& phi, const ValidateOptions& opt) {
  PhaseReport rep;
  const auto pts = sample_patch(phi, opt.samples, opt.seed);
  rep.samples = static_cast<int>(pts.size());
  rep.max_euler_residual = euler_residual(phi.expr, iota(phi.n, phi.N), opt.degree, pts);
  rep.min_im_phi = INFINITY;
  rep.min_dphi = INFINITY;
  const auto all = iota(0, phi.n + phi.N);
  for (const auto& pt : pts) {
    const std::vector<cplx> z(pt.begin(), pt.end());
    rep.min_im_phi = std::min(rep.min_im_phi, expr::eval(phi.expr, z).imag());
    double s = 0.0;
    for (const auto& c : jets::gradient(phi.expr, z, all)) s += std::norm(c);
    rep.min_dphi = std::min(rep.min_dphi, std::sqrt(s));
  }
  rep.homogeneous = rep.max_euler_residual <= opt.euler_tol;
  rep.positive = rep.min_im_phi >= -opt.im_tol;
  rep.nonvanishing_differential = rep.min_dphi > 0.0;
  rep.pass = rep.homogeneous && rep.positive && rep.nonvanishing_differential;
  return rep;
}

CMatrix theta_differentials(const PhaseFunction& phi, const std::vector<cplx>& point) {
  const auto d = full_derivatives(phi, point, 2);
  return d.hess.bottomRows(phi.N);
}

CriticalPoint find_critical(const PhaseFunction& phi, const std::vector<double>& theta_seed,
                            const std::vector<double>& x_seed, const CriticalOptions& opt) {
  if (static_cast<int>(theta_seed.size()) != phi.N) {
    throw ValidationError("theta seed dimension does not match the phase");
  }
  std::vector<cplx> z(static_cast<size_t>(phi.n + phi.N));
  for (int k = 0; k < phi.n; ++k) {
    z[static_cast<size_t>(k)] = x_seed.empty()
                                    ? 0.5 * (phi.patch.x_lo[static_cast<size_t>(k)] + phi.patch.x_hi[static_cast<size_t>(k)])
                                    : x_seed.at(static_cast<size_t>(k));
  }
  for (int k = 0; k < phi.N; ++k) z[static_cast<size_t>(phi.n + k)] = theta_seed[static_cast<size_t>(k)];

  CriticalPoint cp;
  const CMatrix D0 = theta_differentials(phi, z);
  const int M = linalg::rank(D0).rank;
  cp.equations = opt.equations.empty() ? linalg::select_rows(D0, M) : opt.equations;
  const CMatrix rows = linalg::take(D0, cp.equations, iota(0, phi.n + phi.N));
  cp.unknowns = opt.unknowns.empty() ? linalg::select_columns(rows, static_cast<int>(cp.equations.size()),
                                                              iota(0, phi.n))
                                     : opt.unknowns;
  if (cp.unknowns.size() != cp.equations.size()) {
    throw ValidationError("critical point chart needs as many unknowns as equations");
  }
  if (linalg::rank(linalg::take(D0, cp.equations, cp.unknowns)).rank < static_cast<int>(cp.unknowns.size())) {
    throw ConvergenceError("critical point system is rank deficient at the seed");
  }

  const std::vector<cplx> base = z;
  const auto system = [&](const std::vector<cplx>& u, linalg::CVector& g, CMatrix& J) {
    std::vector<cplx> p = base;
    for (size_t k = 0; k < u.size(); ++k) p[static_cast<size_t>(cp.unknowns[k])] = u[k];
    const auto d = full_derivatives(phi, p, 2);
    g.resize(static_cast<Eigen::Index>(cp.equations.size()));
    J.resize(g.size(), g.size());
    for (size_t r = 0; r < cp.equations.size(); ++r) {
      const int row = phi.n + cp.equations[r];
      g(static_cast<Eigen::Index>(r)) = d.grad(row);
      for (size_t c = 0; c < cp.unknowns.size(); ++c) {
        J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d.hess(row, cp.unknowns[c]);
      }
    }
  };
  std::vector<cplx> u;
  for (int k : cp.unknowns) u.push_back(z[static_cast<size_t>(k)]);
  const NewtonOut sol = newton(system, u, opt.tol, opt.max_iter, "find_critical");
  cp.point = base;
  for (size_t k = 0; k < sol.u.size(); ++k) {
    cp.point[static_cast<size_t>(cp.unknowns[k])] = sol.u[k];
  }
  // Roundoff imaginary parts from the extension are cleared.
  for (auto& c : cp.point) {
    if (std::abs(c.imag()) <= 1e-14 * (1.0 + std::abs(c.real()))) c = c.real();
  }
  cp.real = is_real(cp.point);
  const auto d = full_derivatives(phi, cp.point, 1);
  cp.residual = 0.0;
  for (int j = 0; j < phi.N; ++j) cp.residual = std::max(cp.residual, std::abs(d.grad(phi.n + j)));
  cp.iterations = sol.iterations;
  return cp;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kNonDegenerate: return "non-degenerate";
    case Kind::kClean: return "clean";
    case Kind::kDegenerateInvalid: return "degenerate-invalid";
  }
  return "unknown";
}

Classification classify(const PhaseFunction& phi,
                        const std::vector<std::vector<cplx>>& critical_samples, double rel_tol) {
  if (critical_samples.empty()) throw ValidationError("classify needs at least one critical sample");
  Classification c;
  c.N = phi.N;
  CMatrix first;
  for (size_t s = 0; s < critical_samples.size(); ++s) {
    const CMatrix D = theta_differentials(phi, critical_samples[s]);
    const auto info = linalg::rank(D, rel_tol);
    c.ranks.push_back(info.rank);
    if (s == 0) {
      first = D;
      c.singular_values = info.singular_values;
    }
  }
  c.M = *std::min_element(c.ranks.begin(), c.ranks.end());
  c.excess = c.N - c.M;
  c.theta_prime = linalg::select_rows(first, c.M);
  std::sort(c.theta_prime.begin(), c.theta_prime.end());
  for (int j = 0; j < c.N; ++j) {
    if (!std::binary_search(c.theta_prime.begin(), c.theta_prime.end(), j)) c.theta_excess.push_back(j);
  }
  const bool constant = std::all_of(c.ranks.begin(), c.ranks.end(), [&](int r) { return r == c.M; });
  if (!constant) {
    c.kind = Kind::kDegenerateInvalid;
  } else {
    c.kind = c.excess == 0 ? Kind::kNonDegenerate : Kind::kClean;
  }
  return c;
}

std::vector<cplx> x_gradient(const PhaseFunction& phi, const std::vector<cplx>& point) {
  const auto d = full_derivatives(phi, point, 1);
  return std::vector<cplx>(d.grad.data(), d.grad.data() + phi.n);
}

LagrangianSample lambda_sample(const PhaseFunction& phi, const CriticalPoint& cp) {
  LagrangianSample ls;
  ls.x.assign(cp.point.begin(), cp.point.begin() + phi.n);
  ls.xi = x_gradient(phi, cp.point);
  std::vector<cplx> re(cp.point.size());
  for (size_t k = 0; k < re.size(); ++k) re[k] = cp.point[k].real();
  ls.im_phi = expr::eval(phi.expr, re).imag();
  std::vector<cplx> scaled = cp.point;
  for (int j = 0; j < phi.N; ++j) scaled[static_cast<size_t>(phi.n + j)] *= 2.0;
  const auto xi2 = x_gradient(phi, scaled);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < phi.n; ++k) {
    num += std::norm(xi2[static_cast<size_t>(k)] - 2.0 * ls.xi[static_cast<size_t>(k)]);
    den += std::norm(2.0 * ls.xi[static_cast<size_t>(k)]);
  }
  ls.homogeneity_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  return ls;
}

namespace {

struct FiberSystem {
  const PhaseFunction& phi;
  std::vector<int> unknowns;  // x then theta'
  std::vector<int> rows;      // derivative rows: x then theta'
  std::vector<cplx> start;
  std::vector<cplx> xi;

  FiberSystem(const PhaseFunction& p, const std::vector<int>& theta_prime, std::vector<cplx> s,
              std::vector<cplx> target)
      : phi(p), unknowns(iota(0, p.n)), start(std::move(s)), xi(std::move(target)) {
    for (int j : theta_prime) unknowns.push_back(p.n + j);
    rows = unknowns;
    xi.resize(static_cast<size_t>(p.n));
  }

  std::vector<cplx> place(const std::vector<cplx>& u) const {
    std::vector<cplx> p = start;
    for (size_t k = 0; k < u.size(); ++k) p[static_cast<size_t>(unknowns[k])] = u[k];
    return p;
  }

  void operator()(const std::vector<cplx>& u, linalg::CVector& g, CMatrix& J) const {
    const auto d = full_derivatives(phi, place(u), 2);
    const auto m = static_cast<Eigen::Index>(rows.size());
    g.resize(m);
    J.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const int row = rows[static_cast<size_t>(r)];
      g(r) = d.grad(row) - (row < phi.n ? xi[static_cast<size_t>(row)] : cplx{});
      for (Eigen::Index c = 0; c < m; ++c) J(r, c) = d.hess(row, unknowns[static_cast<size_t>(c)]);
    }
  }
};

}  // namespace

std::vector<cplx> fiber_solve(const PhaseFunction& phi, const std::vector<int>& theta_prime,
                              const std::vector<cplx>& xi, const std::vector<cplx>& start,
                              double tol) {
  const FiberSystem sys(phi, theta_prime, start, xi);
  std::vector<cplx> u;
  for (int k : sys.unknowns) u.push_back(start[static_cast<size_t>(k)]);
  const NewtonOut sol = newton(std::cref(sys), u, tol, 50, "fiber_solve");
  return sys.place(sol.u);
}

bool xi_graph_regular(const PhaseFunction& phi, const std::vector<int>& theta_prime,
                      const std::vector<cplx>& point) {
  const FiberSystem sys(phi, theta_prime, point, x_gradient(phi, point));
  std::vector<cplx> u;
  for (int k : sys.unknowns) u.push_back(point[static_cast<size_t>(k)]);
  linalg::CVector g;
  CMatrix J;
  sys(u, g, J);
  return linalg::rank(J).rank == J.rows();
}

PositivityReport positivity_check(const PhaseFunction& phi, const CriticalPoint& base,
                                  int samples, std::uint64_t seed) {
  PositivityReport rep;
  ValidateOptions vo;
  vo.samples = std::max(samples, 1);
  vo.seed = seed;
  rep.min_im_phi = validate_phase(phi, vo).min_im_phi;

  std::vector<int> eqs = base.equations;
  if (eqs.empty()) {
    const CMatrix D = theta_differentials(phi, base.point);
    eqs = linalg::select_rows(D, linalg::rank(D).rank);
  }
  if (!xi_graph_regular(phi, eqs, base.point)) {
    rep.graph = false;
    rep.pass = false;
    rep.message = "not a xi-graph on this patch";
    return rep;
  }
  const auto xi0 = x_gradient(phi, base.point);
  double xi_norm = 0.0;
  for (const auto& v : xi0) xi_norm += std::norm(v);
  xi_norm = std::sqrt(xi_norm);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const aa::AAExtension ext{phi.expr, phi.aa_order};
  rep.min_im_graph = INFINITY;
  std::vector<cplx> xi(static_cast<size_t>(phi.n));
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < phi.n; ++k) {
      xi[static_cast<size_t>(k)] = xi0[static_cast<size_t>(k)].real() + (s == 0 ? 0.0 : 0.1 * xi_norm * gauss(rng));
    }
    std::vector<cplx> p;
    try {
      p = fiber_solve(phi, eqs, xi, base.point, 1e-12 * (1.0 + xi_norm));
    } catch (const ConvergenceError&) {
      rep.graph = false;
      rep.pass = false;
      rep.message = "not a xi-graph on this patch";
      return rep;
    }
    // Reparametrized phase x.xi - g(xi): g = x.xi - phi at the solution, Im g <= 0.
    cplx gval = -aa::value(ext, p);
    for (int k = 0; k < phi.n; ++k) gval += p[static_cast<size_t>(k)] * xi[static_cast<size_t>(k)];
    rep.min_im_graph = std::min(rep.min_im_graph, -gval.imag());
    ++rep.samples;
  }
  rep.pass = rep.min_im_phi >= -1e-10 && rep.min_im_graph >= -1e-10;
  if (!rep.pass) rep.message = rep.min_im_phi < -1e-10 ? "Im phi < 0 on the patch" : "Im g > 0 on the xi-graph";
  return rep;
}

}  // namespace fiocalc::phase
