// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/almost_analytic.hpp"

#include <algorithm>
#include <cmath>

#include "fiocalc/jet.hpp"
#include "fiocalc/oracle.hpp"

namespace fiocalc::aa {

namespace {

bool all_real(const std::vector<cplx>& z) {
  return std::all_of(z.begin(), z.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

cplx ipow_i(int k) {
  static const cplx kPowers[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return kPowers[k % 4];
}

}  // namespace

AAExtension extend(const Expr& f, int order) {
  if (order < 0) throw Error(ErrorCode::kValidation, "extension order must be >= 0");
  return AAExtension{f, order};
}

cplx value(const AAExtension& ext, const std::vector<cplx>& z) {
  if (all_real(z)) return expr::eval(ext.f, z);
  return derivatives(ext.f, ext.order, z, {}, 0).value;
}

Derivatives derivatives(const Expr& f, int order, const std::vector<cplx>& z,
                        const std::vector<int>& vars, int max_derivative) {
  const int K = all_real(z) ? 0 : order;
  const int d = static_cast<int>(vars.size());
  const int m = d == 0 ? 0 : max_derivative;
  jets::ShapePtr shape = jets::make_shape({{1, K}, {d, m}});
  std::vector<jets::Jet> x;
  x.reserve(std::max<size_t>(z.size(), 1));
  for (size_t v = 0; v < z.size(); ++v) {
    std::vector<cplx> dir(static_cast<size_t>(1 + d));
    dir[0] = z[v].imag();
    for (int j = 0; j < d; ++j) {
      if (vars[static_cast<size_t>(j)] == static_cast<int>(v)) dir[static_cast<size_t>(1 + j)] = 1.0;
    }
    x.push_back(jets::Jet::linear(shape, z[v].real(), dir));
  }
  if (x.empty()) x.emplace_back(shape, 0.0);
  const jets::Jet j = jets::jet_eval(f, x);

  // ext(d^beta f) = beta! sum_k i^k coef(k, beta).
  std::vector<int> alpha(static_cast<size_t>(1 + d), 0);
  auto ext_coeff = [&](std::vector<int> beta_only) {
    cplx acc{};
    for (int k = K; k >= 0; --k) {
      alpha[0] = k;
      for (int q = 0; q < d; ++q) alpha[static_cast<size_t>(1 + q)] = beta_only[static_cast<size_t>(q)];
      acc += ipow_i(k) * j.coeff(alpha);
    }
    return acc;
  };
  Derivatives out;
  out.value = ext_coeff(std::vector<int>(static_cast<size_t>(d), 0));
  if (K == 0) out.value = j[0];
  if (m >= 1) {
    out.grad.resize(d);
    std::vector<int> beta(static_cast<size_t>(d), 0);
    for (int a = 0; a < d; ++a) {
      beta[static_cast<size_t>(a)] = 1;
      out.grad(a) = ext_coeff(beta);
      beta[static_cast<size_t>(a)] = 0;
    }
  }
  if (m >= 2) {
    out.hess.resize(d, d);
    std::vector<int> beta(static_cast<size_t>(d), 0);
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        beta[static_cast<size_t>(a)] += 1;
        beta[static_cast<size_t>(b)] += 1;
        const cplx c = ext_coeff(beta);
        beta[static_cast<size_t>(a)] -= 1;
        beta[static_cast<size_t>(b)] -= 1;
        const cplx v = a == b ? 2.0 * c : c;
        out.hess(a, b) = v;
        out.hess(b, a) = v;
      }
    }
  }
  return out;
}

std::vector<cplx> dbar(const AAExtension& ext, const std::vector<cplx>& z) {
  const int n = static_cast<int>(z.size());
  const int K = ext.order;
  std::vector<cplx> out(static_cast<size_t>(n));
  if (all_real(z)) return out;
  jets::ShapePtr shape = jets::make_shape({{1, K}, {n, 1}});
  std::vector<jets::Jet> x;
  for (int v = 0; v < n; ++v) {
    std::vector<cplx> dir(static_cast<size_t>(1 + n));
    dir[0] = z[static_cast<size_t>(v)].imag();
    dir[static_cast<size_t>(1 + v)] = 1.0;
    x.push_back(jets::Jet::linear(shape, z[static_cast<size_t>(v)].real(), dir));
  }
  const jets::Jet j = jets::jet_eval(ext.f, x);
  std::vector<int> alpha(static_cast<size_t>(1 + n), 0);
  alpha[0] = K;
  for (int v = 0; v < n; ++v) {
    alpha[static_cast<size_t>(1 + v)] = 1;
    out[static_cast<size_t>(v)] = 0.5 * ipow_i(K) * j.coeff(alpha);
    alpha[static_cast<size_t>(1 + v)] = 0;
  }
  return out;
}

DbarFit dbar_order(const AAExtension& ext, const std::vector<double>& x,
                   const std::vector<std::vector<double>>& directions, double h_min, double h_max,
                   int samples) {
  DbarFit fit;
  fit.exact = true;
  bool first = true;
  for (const auto& dirv : directions) {
    std::vector<double> hs;
    std::vector<double> vals;
    bool exact = true;
    for (int s = 0; s < samples; ++s) {
      const double h = h_max * std::pow(h_min / h_max, static_cast<double>(s) / (samples - 1));
      std::vector<cplx> z(x.size());
      for (size_t k = 0; k < x.size(); ++k) z[k] = cplx(x[k], h * dirv.at(k));
      const auto db = dbar(ext, z);
      double mag = 0.0;
      for (const auto& v : db) mag = std::max(mag, std::abs(v));
      if (mag != 0.0) exact = false;
      hs.push_back(h);
      vals.push_back(mag);
    }
    if (exact) continue;
    fit.exact = false;
    oracle::OrderFit of = oracle::fit_order(hs, vals, 0.0);
    if (first || of.slope < fit.slope) {
      fit.slope = of.slope;
      fit.intercept = of.intercept;
      fit.residual = of.residual;
      fit.heights = hs;
      fit.values = vals;
      first = false;
    }
  }
  return fit;
}

namespace {

std::vector<cplx> eval_graph(const GraphManifold& m, const std::vector<cplx>& z) {
  std::vector<cplx> out;
  out.reserve(m.h.size());
  for (const auto& h : m.h) out.push_back(value(AAExtension{h, m.order}, z));
  return out;
}

double norm_of(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

EquivalenceResult manifolds_equivalent(const GraphManifold& m1, const GraphManifold& m2,
                                       const std::vector<std::vector<double>>& base_points,
                                       const std::vector<std::vector<double>>& directions,
                                       const EquivalenceOptions& opt) {
  if (m1.dim != m2.dim || m1.h.size() != m2.h.size()) {
    throw Error(ErrorCode::kValidation, "manifolds have incompatible splittings (z', z'')");
  }
  EquivalenceResult res;
  res.max_order_tested = opt.max_order;
  for (const auto& x : base_points) {
    if (static_cast<int>(x.size()) != m1.dim) {
      throw Error(ErrorCode::kValidation, "sample point dimension does not match the splitting");
    }
    const std::vector<cplx> zr(x.begin(), x.end());
    const auto h1r = eval_graph(m1, zr);
    const auto h2r = eval_graph(m2, zr);
    double im2 = 0.0;
    std::vector<cplx> diff(h1r.size());
    for (size_t c = 0; c < h1r.size(); ++c) {
      diff[c] = h1r[c] - h2r[c];
      im2 += h2r[c].imag() * h2r[c].imag();
    }
    if (std::sqrt(im2) <= opt.trace_tol && norm_of(diff) > opt.trace_tol) {
      res.equivalent = false;
      res.reason = "h1 != h2 at a real point where Im h2 = 0";
      res.worst_ratio = INFINITY;
      return res;
    }
    for (const auto& v : directions) {
      std::vector<double> hs;
      std::vector<double> ds;
      std::vector<double> ss;
      for (int s = 0; s < opt.heights; ++s) {
        const double h = opt.h_max * std::pow(opt.h_min / opt.h_max,
                                              static_cast<double>(s) / (opt.heights - 1));
        std::vector<cplx> z(x.size());
        for (size_t k = 0; k < x.size(); ++k) z[k] = cplx(x[k], h * v.at(k));
        const auto a = eval_graph(m1, z);
        const auto b = eval_graph(m2, z);
        std::vector<cplx> d(a.size());
        double scale = 1.0;
        double sim = 0.0;
        for (size_t c = 0; c < a.size(); ++c) {
          d[c] = a[c] - b[c];
          scale = std::max(scale, std::abs(b[c]));
          sim += b[c].imag() * b[c].imag();
        }
        double dn = norm_of(d);
        if (dn <= opt.noise_floor * scale) dn = 0.0;
        const double sn = std::sqrt(sim);
        if (sn == 0.0 && dn > 0.0) {
          res.equivalent = false;
          res.reason = "h1 != h2 where Im h2 = 0";
          res.worst_ratio = INFINITY;
          return res;
        }
        hs.push_back(h);
        ds.push_back(dn);
        ss.push_back(sn);
      }
      for (int n = 1; n <= opt.max_order; ++n) {
        std::vector<double> lh;
        std::vector<double> lr;
        for (size_t k = 0; k < hs.size(); ++k) {
          if (ds[k] == 0.0) continue;
          const double r = ds[k] / std::pow(ss[k], n);
          res.worst_ratio = std::max(res.worst_ratio, r);
          lh.push_back(std::log(hs[k]));
          lr.push_back(std::log(r));
        }
        if (lh.size() < 3) continue;
        // Growth exponent of the ratio as h -> 0 is minus the slope in log h.
        double mx = 0.0;
        double my = 0.0;
        for (size_t k = 0; k < lh.size(); ++k) {
          mx += lh[k];
          my += lr[k];
        }
        mx /= static_cast<double>(lh.size());
        my /= static_cast<double>(lh.size());
        double sxy = 0.0;
        double sxx = 0.0;
        for (size_t k = 0; k < lh.size(); ++k) {
          sxy += (lh[k] - mx) * (lr[k] - my);
          sxx += (lh[k] - mx) * (lh[k] - mx);
        }
        const double growth = -sxy / sxx;
        res.worst_growth = std::max(res.worst_growth, growth);
        if (growth > opt.growth_tol) {
          res.equivalent = false;
          res.reason = "|h1 - h2| / |Im h2|^" + std::to_string(n) + " grows towards the real trace";
        }
      }
    }
  }
  return res;
}

}  // namespace fiocalc::aa
