// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Composition of two operators with complex phases: the composed phase,
// the excess of the intersection, the composed order and symbol, and a
// nested quadrature oracle for pairings of the composed kernel.

#ifndef FIOCALC_COMPOSE_HPP
#define FIOCALC_COMPOSE_HPP

#include <complex>
#include <string>
#include <vector>

#include "fiocalc/oracle.hpp"
#include "fiocalc/phase.hpp"
#include "fiocalc/symbol.hpp"

namespace fiocalc::compose {

using cplx = std::complex<double>;
using expr::Expr;
using expr::VarLayout;

// Kernel of A1 lives on {x, y, theta}; kernel of A2 on {y, z, sigma}.
struct OperatorKernel {
  Expr phase;
  Expr amplitude;
  VarLayout layout;
  double degree = 0.0;  // homogeneity degree of the amplitude in the frequency
  int n_left = 0;
  int n_right = 0;
  int N = 0;
  double order = 0.0;   // degree - (n_left + n_right - 2N)/4
};

// which = 1 parses over {x, y, theta}; which = 2 over {y, z, sigma}.
OperatorKernel make_kernel(int which, const std::string& phase, const std::string& amplitude,
                           double degree, int n_left, int n_right, int N);

struct CompositionPlan {
  OperatorKernel k1;
  OperatorKernel k2;
  int nX = 0, nY = 0, nZ = 0, N1 = 0, N2 = 0;
  VarLayout layout;   // {x, z, y, theta, sigma}
  Expr Phi;           // phi1 + phi2 over `layout`
  Expr a12;           // a1 * a2 over `layout`
  Expr phi1, phi2, a1, a2;  // the factors over `layout`
  // Chart omega = (y |(theta, sigma)|, theta, sigma): Phi is homogeneous of
  // degree 1 there and is an ordinary phase with base (x, z).
  phase::PhaseFunction Phi_omega;
  symbol::Amplitude b;  // a1 a2 |(theta, sigma)|^(-nY) in the omega chart
  double euler_residual = 0.0;
  double min_im_Phi = 0.0;

  // (x, z, y, theta, sigma) <-> (x, z, omega, theta, sigma)
  std::vector<cplx> to_omega(const std::vector<cplx>& p) const;
  std::vector<cplx> from_omega(const std::vector<cplx>& q) const;
};

// `seed` is a real point (x, z, y, theta, sigma) near the stationary set; it
// orients the conic patch used for the homogeneity checks.
CompositionPlan build_composed_phase(const OperatorKernel& k1, const OperatorKernel& k2,
                                     const std::vector<double>& seed, int samples = 200);

struct ExcessReport {
  int excess = 0;
  int rank = 0;
  int n_omega = 0;
  int tangent_dim = 0;                    // nX + nZ + e
  phase::Classification cls;              // in the omega chart
  phase::CriticalPoint base;              // omega chart, from the seed itself
  std::vector<std::vector<cplx>> samples; // omega chart stationary points
};

// Stationary points of Phi are found by Newton from the seed and from
// `samples - 1` random perturbations of it; the excess is #omega - rank.
// Throws ValidationError ("not clean") when the rank varies.
ExcessReport intersection_excess(const CompositionPlan& plan, const std::vector<double>& seed,
                                 int samples = 10, std::uint64_t rng_seed = 1, double spread = 0.2);

double composed_order(double m1, double m2, int e);

struct ComposedSymbol {
  symbol::SymbolValue value;
  double composed_order = 0.0;   // m1 + m2 + e/2
  double grade = 0.0;            // m1 + m2 - e/2 + (nX + nZ)/4 for the fiber integrand
  double fiber_jacobian = 1.0;   // d omega'' / d(y'', theta'', sigma'') at the base point
  std::string path;              // "transverse" or "clean"
};

// Point formula b~ [det (1/i) Hess (Phi - psi)]^(-1/2), e = 0 only.
ComposedSymbol composed_symbol_transverse(const CompositionPlan& plan, const ExcessReport& ex,
                                          double lambda = 1.0);

// Fiber integral over the excess variables in the omega chart, re-solving the
// stationary equations at every node. Works for e = 0 (a single node).
// `fiber_box` holds one interval per excess variable in the omega chart.
ComposedSymbol composed_symbol_clean(const CompositionPlan& plan, const ExcessReport& ex,
                                     const std::vector<oracle::Interval>& fiber_box,
                                     double lambda = 1.0);

// Converts a box in (y'', theta'', sigma'') coordinates to the omega chart
// using |(theta, sigma)| at the base point.
std::vector<oracle::Interval> fiber_box_to_omega(const CompositionPlan& plan, const ExcessReport& ex,
                                                 const std::vector<oracle::Interval>& box);

struct OracleInputs {
  // Over plan.layout. u_x depends on x, u_z on z; psi_x, psi_z are the test
  // phases, so the test functions are exp(-i t psi) u.
  Expr u_x, u_z, psi_x, psi_z;
  // Windows in the scaled frequencies eta = theta / t and varsigma = sigma / t.
  Expr window1, window2;
  std::vector<oracle::Interval> x_box, z_box, y_box, theta_box, sigma_box;
  double rtol = 1e-6;
  double atol = 1e-15;
  double c = 0.5;  // initial nodes per radian of phase change, Gaussian data
  double max_points = 2e9;
};

// Test data built from a base stationary point: psi from the point with
// concavity lambda, u_x, u_z Gaussians of width `radius` around x0, z0,
// windows Gaussians of relative width `window` around theta0, sigma0
// (non-excess frequency variables only). Boxes keep 4.5 widths on each side;
// y boxes and excess frequency boxes are rough guesses to be checked.
OracleInputs default_oracle_inputs(const CompositionPlan& plan, const ExcessReport& ex,
                                   double lambda, double radius, double window);

struct PairingSample {
  double t = 0.0;
  cplx value{};
  int levels = 0;
  double change = 0.0;
  double points = 0.0;
  std::vector<int> outer_nodes;
  std::vector<int> inner1_nodes;
  std::vector<int> inner2_nodes;
};

// t^(N1+N2) int dy G(y) H(y) with
//   G(y) = int exp(i t (phi1(x,y,eta) - psi_x(x))) a1(x,y,t eta) u_x(x) window1(eta) dx deta
//   H(y) = int exp(i t (phi2(y,z,s) - psi_z(z))) a2(y,z,t s) u_z(z) window2(s) dz ds.
// Factors of a1, a2 that depend on y only are moved to the outer integral and
// the inner integrals are computed once per value of the y variables they use.
PairingSample compose_kernels_oracle(const CompositionPlan& plan, const OracleInputs& in, double t);

struct OrderReport {
  std::vector<PairingSample> samples;
  oracle::OrderFit fit;
  double fitted_order = 0.0;     // slope + (nX + nZ)/4
  double predicted_order = 0.0;  // m1 + m2 + e/2
};

OrderReport composed_order_fit(const CompositionPlan& plan, const ExcessReport& ex,
                               const OracleInputs& in, const std::vector<double>& t_grid);

}  // namespace fiocalc::compose

#endif  // FIOCALC_COMPOSE_HPP
