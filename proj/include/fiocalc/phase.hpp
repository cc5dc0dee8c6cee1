// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Phase functions phi(x, theta): positive-type checks, critical points,
// clean/non-degenerate classification and samples of the Lagrangian.

#ifndef FIOCALC_PHASE_HPP
#define FIOCALC_PHASE_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fiocalc/almost_analytic.hpp"
#include "fiocalc/expr.hpp"
#include "fiocalc/linalg.hpp"

namespace fiocalc::phase {

using cplx = std::complex<double>;
using expr::Expr;
using expr::VarLayout;
using linalg::CMatrix;

// x-box times a cone of directions around a unit vector, radial interval.
struct ConicPatch {
  std::vector<double> x_lo;
  std::vector<double> x_hi;
  std::vector<double> direction;  // normalized on construction
  double angle = 0.3;             // angular radius in radians
  double r_lo = 0.5;
  double r_hi = 2.0;
};

struct PhaseFunction {
  Expr expr;
  VarLayout layout;  // base variables first, frequency variables last
  int n = 0;         // base dimension
  int N = 0;         // frequency dimension
  ConicPatch patch;
  int aa_order = aa::kDefaultOrder;
};

// Builds a phase over the layout {x: n, theta: N}.
PhaseFunction make_phase(const std::string& source, int n, int N, ConicPatch patch = {},
                         const std::string& base_group = "x",
                         const std::string& freq_group = "theta");
// Phase from an already parsed expression; base variables are all groups not
// flagged as frequency, and must come first in the layout.
PhaseFunction make_phase(Expr e, VarLayout layout, ConicPatch patch = {});

// Deterministic real samples of the patch. The first sample is the patch
// center (box midpoint, radius sqrt(r_lo r_hi), direction).
std::vector<std::vector<double>> sample_patch(const PhaseFunction& phi, int count,
                                              std::uint64_t seed);

struct PhaseReport {
  double max_euler_residual = 0.0;  // |theta . d_theta phi - phi| / (1 + |phi|)
  double min_im_phi = 0.0;
  double min_dphi = 0.0;
  int samples = 0;
  bool homogeneous = true;
  bool positive = true;
  bool nonvanishing_differential = true;
  bool pass = true;
};

struct ValidateOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  double euler_tol = 1e-10;
  double im_tol = 1e-12;
  double degree = 1.0;  // homogeneity degree checked by the Euler identity
};

PhaseReport validate_phase(const PhaseFunction& phi, const ValidateOptions& opt = {});

// Euler residual of an arbitrary expression for a given degree in the
// variables `freq`, maximum over the points.
double euler_residual(const Expr& e, const std::vector<int>& freq, double degree,
                      const std::vector<std::vector<double>>& points);

struct CriticalPoint {
  std::vector<cplx> point;  // (x, theta)
  double residual = 0.0;    // max |d_theta' phi~|
  bool real = true;
  int iterations = 0;
  std::vector<int> unknowns;  // flat indices solved for
  std::vector<int> equations; // theta indices whose derivative was driven to 0
};

struct CriticalOptions {
  double tol = 1e-12;
  int max_iter = 50;
  // Flat variable indices to solve for; empty selects them automatically
  // from the Jacobian at the seed, preferring x columns.
  std::vector<int> unknowns;
  // theta indices (0-based within the frequency group) whose derivatives
  // form the system; empty means all independent ones.
  std::vector<int> equations;
};

// Damped Newton for d_theta' phi~ = 0 from the seed (x_seed, theta_seed).
CriticalPoint find_critical(const PhaseFunction& phi, const std::vector<double>& theta_seed,
                            const std::vector<double>& x_seed, const CriticalOptions& opt = {});

enum class Kind { kNonDegenerate, kClean, kDegenerateInvalid };
const char* kind_name(Kind k);

struct Classification {
  int M = 0;
  int N = 0;
  int excess = 0;
  Kind kind = Kind::kNonDegenerate;
  std::vector<int> theta_prime;   // indices within the frequency group
  std::vector<int> theta_excess;  // the rest
  std::vector<int> ranks;         // rank at each sample
  std::vector<double> singular_values;  // at the first sample
};

// N x (n + N) matrix of d(d phi / d theta_j) at a point.
CMatrix theta_differentials(const PhaseFunction& phi, const std::vector<cplx>& point);

Classification classify(const PhaseFunction& phi,
                        const std::vector<std::vector<cplx>>& critical_samples,
                        double rel_tol = 1e-8);

struct LagrangianSample {
  std::vector<cplx> x;
  std::vector<cplx> xi;
  double im_phi = 0.0;        // Im phi at the underlying point
  double homogeneity_error = 0.0;  // |xi(2 theta) - 2 xi(theta)| / |xi|
};

LagrangianSample lambda_sample(const PhaseFunction& phi, const CriticalPoint& cp);

struct PositivityReport {
  bool graph = true;  // Lambda is locally a graph over xi
  bool pass = true;
  double min_im_phi = 0.0;     // over real patch samples
  double min_im_graph = 0.0;   // min of -Im H(xi) along real xi near the base
  int samples = 0;
  std::string message;
};

// Positivity near a real critical point: Im phi >= 0 on the patch and
// Im h >= 0 for the graph function h with x = -dh/dxi obtained by solving
// {d_theta' phi = 0, d_x phi = xi} for real xi near the base point.
PositivityReport positivity_check(const PhaseFunction& phi, const CriticalPoint& base,
                                  int samples = 24, std::uint64_t seed = 1);

// Gradient of phi~ in x at a point.
std::vector<cplx> x_gradient(const PhaseFunction& phi, const std::vector<cplx>& point);

// Solves {d_x phi~ = xi, d_theta' phi~ = 0} for (x, theta') starting from
// `start`; the remaining frequency variables keep their values in `start`.
// theta_prime holds indices within the frequency group. Throws
// ConvergenceError when Newton fails or the system is singular.
std::vector<cplx> fiber_solve(const PhaseFunction& phi, const std::vector<int>& theta_prime,
                              const std::vector<cplx>& xi, const std::vector<cplx>& start,
                              double tol = 1e-12);

// Rank test of the system above at a point (the xi-graph condition).
bool xi_graph_regular(const PhaseFunction& phi, const std::vector<int>& theta_prime,
                      const std::vector<cplx>& point);

}  // namespace fiocalc::phase

#endif  // FIOCALC_PHASE_HPP
