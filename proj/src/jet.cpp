// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/jet.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>

namespace fiocalc::jets {

namespace {

// Multi-indices of total degree <= k in d variables, graded, then
// lexicographically decreasing in the first component.
std::vector<std::vector<int>> simplex(int d, int k) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= k; ++deg) {
    std::vector<int> a(static_cast<size_t>(d), 0);
    // Enumerate compositions of deg into d parts.
    std::vector<std::vector<int>> level;
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == d - 1) {
        a[static_cast<size_t>(pos)] = left;
        level.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a[static_cast<size_t>(pos)] = v;
        rec(pos + 1, left - v);
      }
    };
    if (d == 0) {
      if (deg == 0) out.emplace_back();
      continue;
    }
    rec(0, deg);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::shared_ptr<Shape> build_shape(const std::vector<std::pair<int, int>>& groups) {
  auto s = std::make_shared<Shape>();
  s->groups = groups;
  std::vector<std::vector<std::vector<int>>> per;
  for (const auto& [d, k] : groups) {
    per.push_back(simplex(d, k));
    s->nvars += d;
    s->nilpotency += k;
  }
  // Cartesian product, first group outermost.
  std::vector<std::vector<int>> all{{}};
  for (const auto& g : per) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : all) {
      for (const auto& a : g) {
        auto v = prefix;
        v.insert(v.end(), a.begin(), a.end());
        next.push_back(std::move(v));
      }
    }
    all = std::move(next);
  }
  s->alpha = std::move(all);
  s->size = static_cast<int>(s->alpha.size());
  std::map<std::vector<int>, int> lookup;
  for (int k = 0; k < s->size; ++k) lookup[s->alpha[static_cast<size_t>(k)]] = k;
  std::vector<std::vector<std::pair<int, int>>> buckets(static_cast<size_t>(s->size));
  std::vector<int> sum(static_cast<size_t>(s->nvars));
  for (int i = 0; i < s->size; ++i) {
    for (int j = 0; j < s->size; ++j) {
      for (int v = 0; v < s->nvars; ++v) {
        sum[static_cast<size_t>(v)] =
            s->alpha[static_cast<size_t>(i)][static_cast<size_t>(v)] +
            s->alpha[static_cast<size_t>(j)][static_cast<size_t>(v)];
      }
      auto it = lookup.find(sum);
      if (it != lookup.end()) buckets[static_cast<size_t>(it->second)].emplace_back(i, j);
    }
  }
  s->pair_begin.push_back(0);
  for (const auto& b : buckets) {
    s->pairs.insert(s->pairs.end(), b.begin(), b.end());
    s->pair_begin.push_back(static_cast<int>(s->pairs.size()));
  }
  return s;
}

}  // namespace

int Shape::index(const std::vector<int>& a) const {
  // Linear scan is fine at these sizes and only used outside hot loops.
  for (int k = 0; k < size; ++k) {
    if (alpha[static_cast<size_t>(k)] == a) return k;
  }
  return -1;
}

ShapePtr make_shape(const std::vector<std::pair<int, int>>& groups) {
  static std::mutex mu;
  static std::map<std::vector<std::pair<int, int>>, ShapePtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(groups);
  if (it != cache.end()) return it->second;
  for (const auto& [d, k] : groups) {
    if (d < 0 || k < 0) throw Error(ErrorCode::kInternal, "invalid jet shape");
  }
  ShapePtr s = build_shape(groups);
  cache.emplace(groups, s);
  return s;
}

Jet::Jet(ShapePtr shape, cplx c0) : shape_(std::move(shape)) {
  c_.assign(static_cast<size_t>(shape_->size), cplx{});
  c_[0] = c0;
}

Jet Jet::linear(ShapePtr shape, cplx base, const std::vector<cplx>& dir) {
  Jet j(std::move(shape), base);
  const Shape& s = *j.shape_;
  std::vector<int> a(static_cast<size_t>(s.nvars), 0);
  for (int d = 0; d < s.nvars && d < static_cast<int>(dir.size()); ++d) {
    if (dir[static_cast<size_t>(d)] == cplx{}) continue;
    a[static_cast<size_t>(d)] = 1;
    const int k = s.index(a);
    if (k >= 0) j.c_[static_cast<size_t>(k)] = dir[static_cast<size_t>(d)];
    a[static_cast<size_t>(d)] = 0;
  }
  return j;
}

cplx Jet::coeff(const std::vector<int>& alpha) const {
  const int k = shape_->index(alpha);
  return k < 0 ? cplx{} : c_[static_cast<size_t>(k)];
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.shape_, cplx{});
  const Shape& s = *a.shape_;
  const auto* pa = a.c_.data();
  const auto* pb = b.c_.data();
  for (int k = 0; k < s.size; ++k) {
    cplx acc{};
    for (int p = s.pair_begin[static_cast<size_t>(k)]; p < s.pair_begin[static_cast<size_t>(k + 1)];
         ++p) {
      const auto& [i, j] = s.pairs[static_cast<size_t>(p)];
      acc += pa[i] * pb[j];
    }
    r.c_[static_cast<size_t>(k)] = acc;
  }
  return r;
}

namespace {

// f(a0 + h) = sum_k coef[k] h^k by Horner on the nilpotent part h.
Jet compose(const Jet& a, const std::vector<cplx>& coef) {
  Jet h = a;
  h[0] = 0.0;
  const int kmax = static_cast<int>(coef.size()) - 1;
  Jet r(a.shape(), coef[static_cast<size_t>(kmax)]);
  for (int k = kmax - 1; k >= 0; --k) {
    r = r * h;
    r[0] += coef[static_cast<size_t>(k)];
  }
  // Keep the constant term identical to the scalar evaluation.
  r[0] = coef[0];
  return r;
}

int horner_order(const Jet& a) { return a.shape()->nilpotency; }

}  // namespace

Jet make_const(const Jet& like, cplx c) { return Jet(like.shape(), c); }

cplx value0(const Jet& a) { return a[0]; }

Jet ipow(const Jet& a, int n) {
  Jet result(a.shape(), 1.0);
  Jet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Jet checked_div(const Jet& a, const Jet& b) {
  const cplx b0 = b[0];
  if (b0 == cplx{}) throw DomainError("division by zero");
  const Shape& s = *a.shape();
  Jet c(a.shape(), cplx{});
  // Coefficients of c = a / b in index order: every proper sub-index of
  // alpha_k precedes k, so c_k depends only on known entries.
  for (int k = 0; k < s.size; ++k) {
    cplx acc = a[k];
    for (int p = s.pair_begin[static_cast<size_t>(k)]; p < s.pair_begin[static_cast<size_t>(k + 1)];
         ++p) {
      const auto& [i, j] = s.pairs[static_cast<size_t>(p)];
      if (j == 0) continue;
      acc -= c[i] * b[j];
    }
    c[k] = acc / b0;
  }
  return c;
}

Jet checked_log(const Jet& a) {
  const cplx a0 = a[0];
  if (a0 == cplx{}) throw DomainError("logarithm of zero");
  const int K = horner_order(a);
  std::vector<cplx> coef(static_cast<size_t>(K + 1));
  coef[0] = std::log(a0);
  cplx p = 1.0;
  for (int k = 1; k <= K; ++k) {
    p *= a0;
    coef[static_cast<size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / (static_cast<double>(k) * p);
  }
  return compose(a, coef);
}

Jet cpow(const Jet& a, cplx p) {
  const cplx a0 = a[0];
  const int K = horner_order(a);
  if (a0 == cplx{}) {
    if (K == 0 && p.real() > 0.0) return Jet(a.shape(), 0.0);
    throw DomainError("non-integer power of zero");
  }
  std::vector<cplx> coef(static_cast<size_t>(K + 1));
  coef[0] = expr::cpow(a0, p);
  for (int k = 1; k <= K; ++k) {
    coef[static_cast<size_t>(k)] =
        coef[static_cast<size_t>(k - 1)] * (p - static_cast<double>(k - 1)) /
        (static_cast<double>(k) * a0);
  }
  return compose(a, coef);
}

Jet exp(const Jet& a) {
  const int K = horner_order(a);
  std::vector<cplx> coef(static_cast<size_t>(K + 1));
  coef[0] = std::exp(a[0]);
  for (int k = 1; k <= K; ++k) {
    coef[static_cast<size_t>(k)] = coef[static_cast<size_t>(k - 1)] / static_cast<double>(k);
  }
  return compose(a, coef);
}

Jet sqrt(const Jet& a) {
  const cplx a0 = a[0];
  const int K = horner_order(a);
  if (a0 == cplx{}) {
    if (K == 0) return Jet(a.shape(), 0.0);
    throw DomainError("square root of zero inside a jet");
  }
  std::vector<cplx> coef(static_cast<size_t>(K + 1));
  coef[0] = std::sqrt(a0);
  for (int k = 1; k <= K; ++k) {
    coef[static_cast<size_t>(k)] =
        coef[static_cast<size_t>(k - 1)] * (0.5 - static_cast<double>(k - 1)) /
        (static_cast<double>(k) * a0);
  }
  return compose(a, coef);
}

namespace {

Jet trig(const Jet& a, bool is_sin) {
  const int K = horner_order(a);
  const cplx s = std::sin(a[0]);
  const cplx c = std::cos(a[0]);
  // Derivative cycle of sin: s, c, -s, -c; of cos: c, -s, -c, s.
  const cplx cyc_sin[4] = {s, c, -s, -c};
  const cplx cyc_cos[4] = {c, -s, -c, s};
  std::vector<cplx> coef(static_cast<size_t>(K + 1));
  double fact = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) fact *= k;
    coef[static_cast<size_t>(k)] = (is_sin ? cyc_sin[k % 4] : cyc_cos[k % 4]) / fact;
  }
  return compose(a, coef);
}

}  // namespace

Jet sin(const Jet& a) { return trig(a, true); }
Jet cos(const Jet& a) { return trig(a, false); }

Jet jet_eval(const expr::Expr& e, const std::vector<Jet>& vars) {
  return expr::evaluate(*e, vars);
}

Jet jet_of(const expr::Expr& e, const std::vector<cplx>& base, const std::vector<int>& active,
           int order) {
  ShapePtr s = make_shape({{static_cast<int>(active.size()), order}});
  std::vector<Jet> vars;
  vars.reserve(base.empty() ? 1 : base.size());
  for (size_t v = 0; v < base.size(); ++v) {
    std::vector<cplx> dir(active.size());
    for (size_t a = 0; a < active.size(); ++a) {
      if (active[a] == static_cast<int>(v)) dir[a] = 1.0;
    }
    vars.push_back(Jet::linear(s, base[v], dir));
  }
  if (vars.empty()) vars.emplace_back(s, 0.0);
  return jet_eval(e, vars);
}

std::vector<cplx> gradient(const expr::Expr& e, const std::vector<cplx>& base,
                           const std::vector<int>& vars) {
  const Jet j = jet_of(e, base, vars, 1);
  std::vector<cplx> g(vars.size());
  std::vector<int> a(vars.size(), 0);
  for (size_t k = 0; k < vars.size(); ++k) {
    a[k] = 1;
    g[k] = j.coeff(a);
    a[k] = 0;
  }
  return g;
}

CMatrix hessian(const expr::Expr& e, const std::vector<cplx>& base,
                const std::vector<int>& vars) {
  const Jet j = jet_of(e, base, vars, 2);
  const auto d = static_cast<Eigen::Index>(vars.size());
  CMatrix h(d, d);
  std::vector<int> a(vars.size(), 0);
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = p; q < d; ++q) {
      a[static_cast<size_t>(p)] += 1;
      a[static_cast<size_t>(q)] += 1;
      const cplx c = j.coeff(a);
      a[static_cast<size_t>(p)] -= 1;
      a[static_cast<size_t>(q)] -= 1;
      const cplx v = (p == q) ? 2.0 * c : c;
      h(p, q) = v;
      h(q, p) = v;
    }
  }
  return h;
}

}  // namespace fiocalc::jets
