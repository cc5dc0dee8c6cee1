// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fiocalc/error.hpp"
#include "fiocalc/parallel.hpp"

namespace fiocalc::oracle {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw Error(ErrorCode::kInternal, "Gauss-Legendre rule needs n >= 1");
  GaussRule r;
  r.nodes.resize(static_cast<size_t>(n));
  r.weights.resize(static_cast<size_t>(n));
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<size_t>(k)] = -x;
    r.nodes[static_cast<size_t>(n - 1 - k)] = x;
    r.weights[static_cast<size_t>(k)] = w;
    r.weights[static_cast<size_t>(n - 1 - k)] = w;
  }
  if (n == 1) r.weights[0] = 2.0;
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

cplx pairwise(const cplx* v, size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  if (n <= 8) {
    cplx acc = v[0];
    for (size_t k = 1; k < n; ++k) acc += v[k];
    return acc;
  }
  const size_t h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}

struct AxisNodes {
  int var = 0;
  int panels = 0;
  std::vector<double> x;
  std::vector<double> w;
};

AxisNodes make_axis(int var, const Interval& iv, int nodes) {
  AxisNodes a;
  a.var = var;
  a.panels = std::max(1, nodes / kPanelNodes);
  const GaussRule& g = gauss_legendre(kPanelNodes);
  const double h = iv.length() / a.panels;
  a.x.reserve(static_cast<size_t>(a.panels * kPanelNodes));
  a.w.reserve(static_cast<size_t>(a.panels * kPanelNodes));
  for (int p = 0; p < a.panels; ++p) {
    const double mid = iv.lo + (p + 0.5) * h;
    for (int q = 0; q < kPanelNodes; ++q) {
      a.x.push_back(mid + 0.5 * h * g.nodes[static_cast<size_t>(q)]);
      a.w.push_back(0.5 * h * g.weights[static_cast<size_t>(q)]);
    }
  }
  return a;
}

class TensorLoop {
 public:
  TensorLoop(const expr::Program& p, const std::vector<AxisNodes>& axes)
      : prog_(p), axes_(axes) {}

  cplx run(std::vector<cplx>* vars, std::vector<cplx>* regs, int depth, int panel_lo,
           int panel_hi) const {
    const AxisNodes& ax = axes_[static_cast<size_t>(depth)];
    const bool last = depth + 1 == static_cast<int>(axes_.size());
    std::vector<cplx> sums;
    sums.reserve(static_cast<size_t>(panel_hi - panel_lo));
    for (int p = panel_lo; p < panel_hi; ++p) {
      cplx acc{};
      for (int q = 0; q < kPanelNodes; ++q) {
        const size_t k = static_cast<size_t>(p * kPanelNodes + q);
        (*vars)[static_cast<size_t>(ax.var)] = ax.x[k];
        prog_.run_level(depth, vars->data(), regs->data());
        cplx v;
        if (last) {
          v = prog_.result(regs->data());
        } else {
          const int np = axes_[static_cast<size_t>(depth + 1)].panels;
          v = run(vars, regs, depth + 1, 0, np);
        }
        acc += ax.w[k] * v;
      }
      sums.push_back(acc);
    }
    return pairwise(sums.data(), sums.size());
  }

 private:
  const expr::Program& prog_;
  const std::vector<AxisNodes>& axes_;
};

}  // namespace

cplx tensor_sum(const expr::Program& program, const std::vector<int>& axes,
                const std::vector<Interval>& box, const std::vector<int>& nodes,
                const std::vector<cplx>& point, double* points) {
  expr::Program prog = program;
  std::vector<int> level(point.size(), -1);
  std::vector<AxisNodes> ax;
  double count = 1.0;
  for (size_t a = 0; a < axes.size(); ++a) {
    level[static_cast<size_t>(axes[a])] = static_cast<int>(a);
    ax.push_back(make_axis(axes[a], box[a], nodes[a]));
    count *= static_cast<double>(ax.back().x.size());
  }
  prog.set_levels(level);
  if (points) *points += count;
  std::vector<cplx> base = point;
  if (base.empty()) base.push_back(0.0);
  if (axes.empty()) return prog(base);
  TensorLoop loop(prog, ax);
  const int panels = ax[0].panels;
  std::vector<cplx> part(static_cast<size_t>(panels));
  parallel_for(panels, [&](int p) {
    std::vector<cplx> vars = base;
    std::vector<cplx> regs(static_cast<size_t>(prog.registers()));
    prog.run_level(-1, vars.data(), regs.data());
    part[static_cast<size_t>(p)] = loop.run(&vars, &regs, 0, p, p + 1);
  });
  const cplx v = pairwise(part.data(), part.size());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw QuadratureError("integrand produced a non-finite value");
  }
  return v;
}

QuadResult integrate(const Expr& integrand, const std::vector<int>& axes,
                     const std::vector<Interval>& box, const std::vector<cplx>& point,
                     std::vector<int> nodes, const QuadOptions& opt) {
  if (axes.size() != box.size()) throw Error(ErrorCode::kInternal, "axes and box differ in size");
  QuadResult res;
  res.box = box;
  if (nodes.size() != axes.size()) nodes.assign(axes.size(), opt.min_nodes);
  for (auto& n : nodes) {
    n = std::max(n, opt.min_nodes);
    n = ((n + kPanelNodes - 1) / kPanelNodes) * kPanelNodes;
    n = std::min(n, std::max(opt.max_nodes, kPanelNodes));
  }
  for (const auto& iv : box) {
    if (!(iv.hi > iv.lo)) {
      res.nodes = nodes;
      res.value = 0.0;
      res.history = {0.0};
      return res;
    }
  }
  const expr::Program prog(integrand, static_cast<int>(point.size()));
  auto total = [&](const std::vector<int>& n) {
    double c = 1.0;
    for (int v : n) c *= v;
    return c;
  };
  cplx prev = tensor_sum(prog, axes, box, nodes, point, &res.points);
  res.history.push_back(prev);
  for (;;) {
    std::vector<int> next = nodes;
    bool grew = false;
    for (auto& n : next) {
      if (2 * n <= opt.max_nodes) {
        n *= 2;
        grew = true;
      }
    }
    if (!grew || total(next) > opt.max_points) {
      res.nodes = nodes;
      res.value = prev;
      throw QuadratureError("quadrature budget exceeded before node doubling stabilized (last change " +
                            std::to_string(res.change) + ")");
    }
    const cplx cur = tensor_sum(prog, axes, box, next, point, &res.points);
    res.history.push_back(cur);
    res.change = std::abs(cur - prev);
    nodes = next;
    prev = cur;
    if (res.change <= opt.rtol * std::abs(cur) || res.change <= opt.atol) break;
  }
  res.nodes = nodes;
  res.value = prev;
  return res;
}

namespace {

int coarse_points(size_t dims) {
  if (dims <= 2) return 17;
  if (dims == 3) return 9;
  return 5;
}

// Calls f(point) for every node of a coarse tensor grid over the box.
template <class F>
void coarse_grid(const std::vector<int>& axes, const std::vector<Interval>& box,
                 const std::vector<cplx>& point, int g, F&& f) {
  std::vector<int> idx(axes.size(), 0);
  std::vector<cplx> z = point;
  for (;;) {
    for (size_t a = 0; a < axes.size(); ++a) {
      z[static_cast<size_t>(axes[a])] =
          box[a].lo + box[a].length() * idx[a] / static_cast<double>(g - 1);
    }
    f(z, idx);
    size_t a = 0;
    while (a < axes.size()) {
      if (++idx[a] < g) break;
      idx[a] = 0;
      ++a;
    }
    if (a == axes.size()) break;
  }
}

}  // namespace

std::vector<double> phase_variation(const Expr& F, const std::vector<int>& axes,
                                    const std::vector<Interval>& box, double t,
                                    const std::vector<cplx>& point) {
  const expr::Program prog(F, static_cast<int>(point.size()));
  const int g = coarse_points(axes.size());
  std::vector<double> gmax(axes.size(), 0.0);
  coarse_grid(axes, box, point, g, [&](std::vector<cplx>& z, const std::vector<int>&) {
    for (size_t a = 0; a < axes.size(); ++a) {
      const auto v = static_cast<size_t>(axes[a]);
      const double h = 1e-5 * std::max(box[a].length(), 1e-300);
      const cplx keep = z[v];
      z[v] = keep + h;
      const cplx fp = prog(z);
      z[v] = keep - h;
      const cplx fm = prog(z);
      z[v] = keep;
      const double d = std::abs(fp - fm) / (2.0 * h);
      if (std::isfinite(d)) gmax[a] = std::max(gmax[a], d);
    }
  });
  std::vector<double> out(axes.size());
  for (size_t a = 0; a < axes.size(); ++a) out[a] = t * gmax[a] * box[a].length();
  return out;
}

std::vector<int> initial_nodes(const std::vector<double>& variation, const QuadOptions& opt) {
  std::vector<int> n;
  for (double v : variation) {
    const double want = opt.c * v / 2.0;
    n.push_back(static_cast<int>(std::min<double>(std::max<double>(want, opt.min_nodes), opt.max_nodes)));
  }
  return n;
}

QuadResult osc_integral(const Expr& F, const Expr& u, const std::vector<int>& axes,
                        const std::vector<Interval>& box_in, double t,
                        const std::vector<cplx>& point, const QuadOptions& opt) {
  std::vector<Interval> box = box_in;
  bool truncated = false;
  if (opt.truncate_damped && !axes.empty()) {
    const expr::Program pf(F, static_cast<int>(point.size()));
    for (int round = 0; round < 12; ++round) {
      const int g = coarse_points(axes.size());
      std::vector<int> lo(axes.size(), g);
      std::vector<int> hi(axes.size(), -1);
      coarse_grid(axes, box, point, g, [&](std::vector<cplx>& z, const std::vector<int>& idx) {
        const cplx f = pf(z);
        if (t * f.imag() <= opt.damping_cut) {
          for (size_t a = 0; a < axes.size(); ++a) {
            lo[a] = std::min(lo[a], idx[a]);
            hi[a] = std::max(hi[a], idx[a]);
          }
        }
      });
      bool changed = false;
      for (size_t a = 0; a < axes.size(); ++a) {
        if (hi[a] < 0) {
          QuadResult r;
          r.box = box;
          r.truncated = true;
          r.nodes.assign(axes.size(), 0);
          r.history = {0.0};
          return r;
        }
        const int l = std::max(lo[a] - 1, 0);
        const int h = std::min(hi[a] + 1, g - 1);
        if (l > 0 || h < g - 1) {
          const double step = box[a].length() / (g - 1);
          const Interval nb{box[a].lo + l * step, box[a].lo + h * step};
          box[a] = nb;
          changed = true;
          truncated = true;
        }
      }
      if (!changed) break;
    }
  }
  const auto var = phase_variation(F, axes, box, t, point);
  const Expr integrand =
      expr::mul(expr::call(expr::Func::kExp, {expr::mul(expr::constant(cplx(0.0, t)), F)}), u);
  QuadResult r = integrate(integrand, axes, box, point, initial_nodes(var, opt), opt);
  r.truncated = truncated;
  return r;
}

OrderFit fit_order(const std::vector<double>& t, const std::vector<double>& err,
                   double noise_floor) {
  if (t.size() != err.size()) throw Error(ErrorCode::kInternal, "fit_order: size mismatch");
  OrderFit f;
  for (size_t k = 0; k < t.size(); ++k) {
    if (!(err[k] > noise_floor) || !std::isfinite(err[k]) || !(t[k] > 0.0)) {
      f.dropped_t.push_back(t[k]);
      continue;
    }
    f.t.push_back(t[k]);
    f.err.push_back(err[k]);
  }
  for (size_t a = 0; a < f.t.size(); ++a) {
    for (size_t b = a + 1; b < f.t.size(); ++b) {
      if (f.t[a] == f.t[b]) throw ConvergenceError("fit_order: sample abscissae must be distinct");
    }
  }
  if (f.t.size() < 4) {
    throw ConvergenceError("fit_order: fewer than 4 usable samples (" + std::to_string(f.t.size()) +
                           " above the noise floor)");
  }
  const auto n = static_cast<double>(f.t.size());
  double mx = 0.0;
  double my = 0.0;
  for (size_t k = 0; k < f.t.size(); ++k) {
    mx += std::log(f.t[k]);
    my += std::log(f.err[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (size_t k = 0; k < f.t.size(); ++k) {
    const double dx = std::log(f.t[k]) - mx;
    sxy += dx * (std::log(f.err[k]) - my);
    sxx += dx * dx;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (size_t k = 0; k < f.t.size(); ++k) {
    const double r = std::log(f.err[k]) - (f.intercept + f.slope * std::log(f.t[k]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

}  // namespace fiocalc::oracle
