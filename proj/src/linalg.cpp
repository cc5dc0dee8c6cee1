// Copyright 2026 The fiocalc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fiocalc/linalg.hpp"

#include <algorithm>

#include "fiocalc/error.hpp"

namespace fiocalc::linalg {

cplx det(const CMatrix& a) {
  if (a.rows() == 0) return 1.0;
  return a.partialPivLu().determinant();
}

RankInfo rank(const CMatrix& a, double rel_tol) {
  RankInfo info;
  if (a.size() == 0) return info;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  info.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return info;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel_tol * smax) ++info.rank;
  }
  return info;
}

namespace {

std::vector<int> greedy(const CMatrix& rows_in, int count, const std::vector<int>& preferred,
                        double slack) {
  CMatrix r = rows_in;
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<size_t>(r.rows()), false);
  for (int step = 0; step < count; ++step) {
    double best = -1.0;
    for (Eigen::Index k = 0; k < r.rows(); ++k) {
      if (!used[static_cast<size_t>(k)]) best = std::max(best, r.row(k).norm());
    }
    int pick = -1;
    for (int p : preferred) {
      if (p < r.rows() && !used[static_cast<size_t>(p)] && r.row(p).norm() >= (1.0 - slack) * best &&
          r.row(p).norm() > 0.0) {
        pick = p;
        break;
      }
    }
    if (pick < 0) {
      for (Eigen::Index k = 0; k < r.rows(); ++k) {
        if (!used[static_cast<size_t>(k)] && r.row(k).norm() == best) {
          pick = static_cast<int>(k);
          break;
        }
      }
    }
    if (pick < 0 || best <= 0.0) throw Error(ErrorCode::kInternal, "row selection ran out of rank");
    used[static_cast<size_t>(pick)] = true;
    chosen.push_back(pick);
    const Eigen::RowVectorXcd q = r.row(pick) / r.row(pick).norm();
    for (Eigen::Index k = 0; k < r.rows(); ++k) {
      if (used[static_cast<size_t>(k)]) continue;
      const cplx c = r.row(k).dot(q);  // conj(r_k) . q
      r.row(k) -= std::conj(c) * q;
    }
  }
  return chosen;
}

}  // namespace

std::vector<int> select_rows(const CMatrix& a, int count) { return greedy(a, count, {}, 0.0); }

std::vector<int> select_columns(const CMatrix& a, int count, const std::vector<int>& preferred,
                                double prefer_slack) {
  return greedy(a.transpose(), count, preferred, prefer_slack);
}

CVector solve(const CMatrix& a, const CVector& b) { return a.partialPivLu().solve(b); }

std::vector<cplx> to_std(const CVector& v) { return std::vector<cplx>(v.data(), v.data() + v.size()); }

CVector to_eigen(const std::vector<cplx>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

CMatrix take(const CMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(rows[r], cols[c]);
    }
  }
  return out;
}

}  // namespace fiocalc::linalg
