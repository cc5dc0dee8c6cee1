// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Truncated multivariate Taylor arithmetic. A jet stores c_alpha =
// d^alpha f / alpha! over a downward closed index set. The set is a product
// of simplices: each group of variables carries its own order bound, so a
// shape [(1, K), (d, 2)] holds K-th order information in one direction and
// second order information in d others. The single group case [(d, K)] is the
// ordinary jet with C(K + d, d) coefficients.

#ifndef FIOCALC_JET_HPP
#define FIOCALC_JET_HPP

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fiocalc/expr.hpp"

namespace fiocalc::jets {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct Shape {
  std::vector<std::pair<int, int>> groups;  // (number of variables, order)
  int nvars = 0;
  int size = 0;
  int nilpotency = 0;  // sum of orders; h^(nilpotency+1) = 0 for h(0) = 0
  std::vector<std::vector<int>> alpha;     // multi-index of each coefficient
  std::vector<int> pair_begin;             // pairs for result k: [pair_begin[k], pair_begin[k+1])
  std::vector<std::pair<int, int>> pairs;  // (i, j) with alpha_i + alpha_j = alpha_k

  // Index of a multi-index, or -1 if outside the set.
  int index(const std::vector<int>& a) const;
};
using ShapePtr = std::shared_ptr<const Shape>;

// Cached, thread safe.
ShapePtr make_shape(const std::vector<std::pair<int, int>>& groups);

class Jet {
 public:
  Jet() = default;
  Jet(ShapePtr shape, cplx c0);

  // base + sum_d dir[d] * eps_d over the shape's generating variables.
  static Jet linear(ShapePtr shape, cplx base, const std::vector<cplx>& dir);

  const ShapePtr& shape() const { return shape_; }
  int size() const { return static_cast<int>(c_.size()); }
  cplx operator[](int k) const { return c_[static_cast<size_t>(k)]; }
  cplx& operator[](int k) { return c_[static_cast<size_t>(k)]; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(const std::vector<int>& alpha) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  ShapePtr shape_;
  std::vector<cplx> c_;
};

// Overload set consumed by expr::evaluate.
Jet make_const(const Jet& like, cplx c);
cplx value0(const Jet& a);
Jet ipow(const Jet& a, int n);
Jet checked_div(const Jet& a, const Jet& b);
Jet checked_log(const Jet& a);
Jet cpow(const Jet& a, cplx p);
Jet exp(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

// Evaluates f(base + h) as a jet in the listed active variables; inactive
// variables stay at their base values.
Jet jet_of(const expr::Expr& e, const std::vector<cplx>& base, const std::vector<int>& active,
           int order);
// Evaluates an expression with every variable given as a jet.
Jet jet_eval(const expr::Expr& e, const std::vector<Jet>& vars);

std::vector<cplx> gradient(const expr::Expr& e, const std::vector<cplx>& base,
                           const std::vector<int>& vars);
CMatrix hessian(const expr::Expr& e, const std::vector<cplx>& base,
                const std::vector<int>& vars);

}  // namespace fiocalc::jets

#endif  // FIOCALC_JET_HPP
