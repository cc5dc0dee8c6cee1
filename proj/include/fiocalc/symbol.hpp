// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Principal symbol samples of Lagrangian distributions: the auxiliary phase
// psi, the branched determinant factor sqrt(d phi), the pairing with
// exp(-i t psi) u and its oracle, and fiber integration for clean phases.

#ifndef FIOCALC_SYMBOL_HPP
#define FIOCALC_SYMBOL_HPP

#include <complex>
#include <string>
#include <vector>

#include "fiocalc/branch.hpp"
#include "fiocalc/oracle.hpp"
#include "fiocalc/phase.hpp"

namespace fiocalc::symbol {

using cplx = std::complex<double>;
using expr::Expr;
using linalg::CMatrix;
using phase::Classification;
using phase::CriticalPoint;
using phase::PhaseFunction;

struct AuxPsi {
  std::vector<double> x0;
  std::vector<double> xi0;
  double lambda = 1.0;
  Expr psi;  // over the phase layout, depends on x only
};

// psi(x) = xi0.(x - x0) - lambda/2 |x - x0|^2 with xi0 = d_x phi(x0, theta0).
AuxPsi make_psi(const PhaseFunction& phi, const CriticalPoint& cp, double lambda = 1.0);

struct SqrtDPhi {
  std::vector<int> vars;  // flat indices of (x, theta')
  CMatrix hessian;        // second derivatives of phi~ - psi~ in those variables
  CMatrix matrix;         // (1/i) hessian
  cplx det{};
  cplx value{};           // branched det(matrix)^(-1/2)
  double grade = 0.0;     // (N - e) / 2
  branch::BranchedSqrt branch;
};

SqrtDPhi sqrt_dphi(const PhaseFunction& phi, const Classification& cls,
                   const std::vector<cplx>& point, const AuxPsi& psi);

struct Amplitude {
  Expr a;               // over the phase layout
  double degree = 0.0;  // homogeneity degree in theta
};

// Parses the amplitude and checks its Euler identity for the declared degree
// on patch samples (relative residual <= 1e-10).
Amplitude make_amplitude(const PhaseFunction& phi, const std::string& source, double degree);
Amplitude make_amplitude(const PhaseFunction& phi, Expr a, double degree);

// Order m of the distribution defined by (phi, a): degree = m + (n - 2N)/4.
double order_of(const PhaseFunction& phi, double degree);

struct FiberOptions {
  std::vector<oracle::Interval> box;  // one interval per excess variable
  double rtol = 1e-8;
  double atol = 1e-14;
  int max_nodes = 1 << 12;  // per axis
  double support_tol = 1e-12;
  // Use the fiber quadrature path even when e = 0 (a zero-dimensional fiber).
  bool quadrature_for_point = false;
};

struct FiberDiagnostics {
  std::vector<int> nodes;  // per axis, final level
  double change = 0.0;
  double boundary_max = 0.0;  // max |a| on the fiber box boundary
  int levels = 0;
};

struct SymbolValue {
  std::vector<cplx> x;
  std::vector<cplx> xi;
  cplx value{};
  double order = 0.0;           // m
  double grade = 0.0;           // m - e + n/4 (m + n/4 when e = 0)
  double value_exponent = 0.0;  // m + e/2 - n/4: scaling of `value` under theta -> s theta, lambda -> s lambda
  int excess = 0;
  cplx amplitude{};             // a~ at the base point
  SqrtDPhi sqrt_dphi;           // at the base point
  FiberDiagnostics fiber;
};

// e = 0: a~ sqrt(d phi) at the point. e > 0: integral over the excess
// variables of a~ sqrt(d phi), re-solving (x, theta') at every node.
SymbolValue principal_symbol(const PhaseFunction& phi, const Amplitude& amp,
                             const Classification& cls, const CriticalPoint& cp, const AuxPsi& psi,
                             const FiberOptions& fiber = {});

struct PairingInputs {
  Expr u;        // test amplitude in x (phase layout)
  Expr window;   // microlocal window in the scaled frequency (phase layout)
  std::vector<oracle::Interval> x_box;
  std::vector<oracle::Interval> eta_box;
  std::vector<double> t_grid;
  oracle::QuadOptions quad;
};

struct PairingRecord {
  std::vector<double> t;
  std::vector<cplx> predicted;
  std::vector<cplx> oracle;
  std::vector<double> rel_error;
  double predicted_exponent = 0.0;  // N + degree - (n + N)/2
  cplx top_coefficient{};           // (2 pi)^((n+N)/2) a~ u~ window~ sqrt(d phi) e^{i t F~}, t = 1
  cplx phase_value{};               // F~ at the critical point
  SqrtDPhi sqrt_dphi;
  bool fitted = false;
  oracle::OrderFit fit;             // of |oracle| against t
};

// t^N int int exp(i t (phi(x, eta) - psi(x))) a(x, t eta) u(x) window(eta) dx deta
// against its top order term. Non-degenerate phases only.
PairingRecord pairing_T(const PhaseFunction& phi, const Amplitude& amp, const AuxPsi& psi,
                        const CriticalPoint& cp, const PairingInputs& in);

// [v1/v2]^2 det M1 / det M2, which should be 1.
cplx transition_identity(const SqrtDPhi& s1, const SqrtDPhi& s2);

}  // namespace fiocalc::symbol

#endif  // FIOCALC_SYMBOL_HPP
