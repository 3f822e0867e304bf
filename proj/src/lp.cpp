/*
 Copyright 2026 The drmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "drmpc/lp.hpp"

#include <vector>

namespace drmpc {
namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kPivotTol = 1e-9;

// Dense tableau with the objective (reduced-cost) row stored last and the
// right-hand side stored in the last column.
struct Tableau {
  Matrix t;                 // (m+1) x (ncols+1)
  std::vector<int> basis;   // column of the basic variable per row
  int m = 0;
  int ncols = 0;
  int iterations = 0;
  bool bland = false;
  int degenerate_streak = 0;

  double rhs(int row) const { return t(row, ncols); }
  double objective() const { return -t(m, ncols); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r <= m; ++r) {
      if (r == row) continue;
      const double factor = t(r, col);
      if (factor != 0.0) t.row(r) -= factor * t.row(row);
    }
    basis[row] = col;
  }

  int choose_entering(int limit_cols) const {
    if (bland) {
      for (int j = 0; j < limit_cols; ++j)
        if (t(m, j) < -kFeasTol) return j;
      return -1;
    }
    int best = -1;
    double best_cost = -kFeasTol;
    for (int j = 0; j < limit_cols; ++j) {
      if (t(m, j) < best_cost) {
        best_cost = t(m, j);
        best = j;
      }
    }
    return best;
  }

  int choose_leaving(int col) const {
    int row = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m; ++r) {
      const double a = t(r, col);
      if (a <= kPivotTol) continue;
      const double ratio = rhs(r) / a;
      if (row < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && basis[r] < basis[row])) {
        best_ratio = ratio;
        row = r;
      }
    }
    return row;
  }

  // Returns Optimal, Unbounded, or IterationLimit for the current cost row.
  LpStatus run(int limit_cols, int max_iters) {
    while (true) {
      const int col = choose_entering(limit_cols);
      if (col < 0) return LpStatus::Optimal;
      const int row = choose_leaving(col);
      if (row < 0) return LpStatus::Unbounded;
      const double before = objective();
      pivot(row, col);
      ++iterations;
      if (objective() > before - 1e-14) {
        if (++degenerate_streak > m) bland = true;
      } else {
        degenerate_streak = 0;
      }
      if (iterations >= max_iters) return LpStatus::IterationLimit;
    }
  }
};

}  // namespace

LpSolution lp_solve(const Vector& c, const Matrix& A_ub, const Vector& b_ub) {
  const int m = static_cast<int>(A_ub.rows());
  const int n = static_cast<int>(c.size());
  require(A_ub.cols() == n && b_ub.size() == m, "lp_solve: shape mismatch");
  require(c.allFinite() && A_ub.allFinite() && b_ub.allFinite(),
          "lp_solve: non-finite data");

  // Standard form: x = p - q with p, q >= 0, one slack per row, artificials
  // on rows whose right-hand side is negative after sign normalization.
  std::vector<int> art_rows;
  for (int r = 0; r < m; ++r)
    if (b_ub[r] < 0.0) art_rows.push_back(r);
  const int n_art = static_cast<int>(art_rows.size());
  const int ncols = 2 * n + m + n_art;
  const int max_iters = 10 * (m + ncols);

  Tableau tab;
  tab.m = m;
  tab.ncols = ncols;
  tab.t = Matrix::Zero(m + 1, ncols + 1);
  tab.basis.assign(m, -1);

  for (int r = 0; r < m; ++r) {
    const double sign = b_ub[r] < 0.0 ? -1.0 : 1.0;
    tab.t.block(r, 0, 1, n) = sign * A_ub.row(r);
    tab.t.block(r, n, 1, n) = -sign * A_ub.row(r);
    tab.t(r, 2 * n + r) = sign;  // slack
    tab.t(r, ncols) = sign * b_ub[r];
  }
  for (int k = 0; k < n_art; ++k) {
    tab.t(art_rows[k], 2 * n + m + k) = 1.0;
    tab.basis[art_rows[k]] = 2 * n + m + k;
  }
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < 0) tab.basis[r] = 2 * n + r;

  LpSolution out;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int r : art_rows) tab.t.row(m) -= tab.t.row(r);
    const LpStatus ph1 = tab.run(ncols, max_iters);
    out.iterations = tab.iterations;
    if (ph1 == LpStatus::IterationLimit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    if (tab.objective() > kFeasTol) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Pivot out artificials that linger in the basis at level zero.
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < 2 * n + m) continue;
      int col = -1;
      for (int j = 0; j < 2 * n + m; ++j) {
        if (std::abs(tab.t(r, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(r, col);
      // A fully zero row is redundant; its artificial stays basic at zero.
    }
  }

  // Phase 2: install the real objective over [p, q] and re-reduce it
  // against the current basis.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, n) = c.transpose();
  tab.t.block(m, n, 1, n) = -c.transpose();
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis[r];
    const double cost = b < n ? c[b] : (b < 2 * n ? -c[b - n] : 0.0);
    if (cost != 0.0) tab.t.row(m) -= cost * tab.t.row(r);
  }

  const LpStatus ph2 = tab.run(2 * n + m, max_iters);
  out.iterations = tab.iterations;
  if (ph2 != LpStatus::Optimal) {
    out.status = ph2;
    return out;
  }

  Vector split = Vector::Zero(2 * n);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < 2 * n) split[tab.basis[r]] = tab.rhs(r);
  out.x = split.head(n) - split.tail(n);
  out.value = c.dot(out.x);
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace drmpc
