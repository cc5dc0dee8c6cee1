// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small dense complex linear algebra on top of Eigen.

#ifndef FIOCALC_LINALG_HPP
#define FIOCALC_LINALG_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fiocalc::linalg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Determinant by LU with partial pivoting; 1 for an empty matrix.
cplx det(const CMatrix& a);

struct RankInfo {
  int rank = 0;
  std::vector<double> singular_values;
};

// Numerical rank with threshold rel_tol * sigma_max.
RankInfo rank(const CMatrix& a, double rel_tol = 1e-8);

// Greedy pivoted selection of `count` rows spanning the row space; each step
// takes the row with the largest component orthogonal to those already
// chosen. Ties go to the lowest index. `preferred` rows win ties within
// `prefer_slack` relative of the best.
std::vector<int> select_rows(const CMatrix& a, int count);
std::vector<int> select_columns(const CMatrix& a, int count, const std::vector<int>& preferred = {},
                                double prefer_slack = 0.5);

CVector solve(const CMatrix& a, const CVector& b);

std::vector<cplx> to_std(const CVector& v);
CVector to_eigen(const std::vector<cplx>& v);

// Submatrix by row and column index lists.
CMatrix take(const CMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols);

}  // namespace fiocalc::linalg

#endif  // FIOCALC_LINALG_HPP
