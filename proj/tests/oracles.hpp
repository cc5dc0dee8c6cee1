// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations used by the tests. They avoid the library code
// paths they are compared against.

#ifndef FIOCALC_TESTS_ORACLES_HPP
#define FIOCALC_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

namespace oracles {

using cplx = std::complex<double>;

// det((1 - s) A + s I)^(-1/2) with A = (1/i) H, followed from s = 1 (value 1)
// to s = 0 in `steps` equal steps, choosing at each step the root closest to
// the previous one.
inline cplx tracked_inv_sqrt_det(const Eigen::MatrixXcd& h, int steps = 10000) {
  const Eigen::MatrixXcd a = cplx(0, -1) * h;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
  cplx r = 1.0;
  for (int k = steps - 1; k >= 0; --k) {
    const double s = static_cast<double>(k) / steps;
    const cplx d = ((1.0 - s) * a + s * id).determinant();
    const cplx c = 1.0 / std::sqrt(d);
    r = std::abs(c - r) <= std::abs(c + r) ? c : -c;
  }
  return r;
}

// Composite Simpson rule with n (even) panels.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Test bump exp(1 - 1/(1 - q)) for q < 1.
inline double bump(double q) { return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0; }

}  // namespace oracles

#endif  // FIOCALC_TESTS_ORACLES_HPP
