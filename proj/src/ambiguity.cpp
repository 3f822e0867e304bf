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

#include "drmpc/ambiguity.hpp"

#include <cmath>
#include <limits>

namespace drmpc {

void SupportPolytope::validate() const {
  require(H.rows() == h.size() && H.rows() >= 1, "support: shape mismatch");
  require(H.allFinite() && h.allFinite(), "support: non-finite data");
  const int n = dim();
  const Vector zero_cost = Vector::Zero(n);
  const LpSolution feas = lp_solve(zero_cost, H, h);
  require(feas.status == LpStatus::Optimal, "support: polytope is empty");
  for (int j = 0; j < n; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(n);
      c[j] = sign;  // min sign*w_j, unbounded means the polytope is unbounded
      const LpSolution probe = lp_solve(c, H, h);
      require(probe.status == LpStatus::Optimal,
              "support: polytope unbounded along a coordinate axis");
    }
  }
}

SupportPolytope box_support(const Vector& lower, const Vector& upper) {
  require(lower.size() == upper.size(), "box_support: size mismatch");
  require((lower.array() <= upper.array()).all(), "box_support: empty box");
  const int n = static_cast<int>(lower.size());
  SupportPolytope s;
  s.H = Matrix::Zero(2 * n, n);
  s.H.topRows(n) = Matrix::Identity(n, n);
  s.H.bottomRows(n) = -Matrix::Identity(n, n);
  s.h = Vector(2 * n);
  s.h.head(n) = upper;
  s.h.tail(n) = -lower;
  return s;
}

double worst_case_expectation(const RowVector& a, const WassersteinBall& ball,
                              const SupportPolytope& support) {
  ball.validate();
  const int n = ball.center.dim();
  require(a.size() == n, "worst_case_expectation: functional size mismatch");
  require(support.dim() == n, "worst_case_expectation: support dim mismatch");

  const int m_samples = ball.center.count();
  const int n_h = support.rows();
  const bool dual_is_one_norm = ball.ground_norm == GroundNorm::Infinity;

  // Variables: [lambda | s_0..s_{M-1} | gamma_0..gamma_{M-1} | (t blocks)].
  const int gamma_off = 1 + m_samples;
  const int t_off = gamma_off + m_samples * n_h;
  const int n_vars = dual_is_one_norm ? t_off + m_samples * n : t_off;

  int n_rows = m_samples            // epigraph rows
               + m_samples * n_h;   // gamma >= 0
  n_rows += dual_is_one_norm ? m_samples * (2 * n + 1) : m_samples * 2 * n;

  Vector c = Vector::Zero(n_vars);
  c[0] = ball.eps;
  c.segment(1, m_samples).setConstant(1.0 / m_samples);

  Matrix A = Matrix::Zero(n_rows, n_vars);
  Vector b = Vector::Zero(n_rows);
  int row = 0;
  for (int l = 0; l < m_samples; ++l) {
    const Vector w = ball.center.samples.row(l).transpose();
    const int g0 = gamma_off + l * n_h;

    // a.w + gamma_l'(h - H w) <= s_l
    A(row, 1 + l) = -1.0;
    A.block(row, g0, 1, n_h) = (support.h - support.H * w).transpose();
    b[row] = -a.dot(w);
    ++row;

    if (!dual_is_one_norm) {
      // |H' gamma_l - a'|_inf <= lambda
      for (int j = 0; j < n; ++j) {
        A(row, 0) = -1.0;
        A.block(row, g0, 1, n_h) = support.H.col(j).transpose();
        b[row] = a[j];
        ++row;
        A(row, 0) = -1.0;
        A.block(row, g0, 1, n_h) = -support.H.col(j).transpose();
        b[row] = -a[j];
        ++row;
      }
    } else {
      // |H' gamma_l - a'|_1 <= lambda via elementwise envelopes t_{l,j}
      const int tl = t_off + l * n;
      for (int j = 0; j < n; ++j) {
        A.block(row, g0, 1, n_h) = support.H.col(j).transpose();
        A(row, tl + j) = -1.0;
        b[row] = a[j];
        ++row;
        A.block(row, g0, 1, n_h) = -support.H.col(j).transpose();
        A(row, tl + j) = -1.0;
        b[row] = -a[j];
        ++row;
      }
      A(row, 0) = -1.0;
      A.block(row, tl, 1, n).setOnes();
      ++row;
    }

    for (int k = 0; k < n_h; ++k) {
      A(row, g0 + k) = -1.0;
      ++row;
    }
  }

  const LpSolution sol = lp_solve(c, A, b);
  switch (sol.status) {
    case LpStatus::Optimal:
      return sol.value;
    case LpStatus::Unbounded:
      throw InvalidInput(
          "worst_case_expectation: dual unbounded, a sample violates the "
          "support");
    case LpStatus::Infeasible:
      throw NumericalError(
          "worst_case_expectation: dual infeasible on a nonempty bounded "
          "support");
    default:
      throw NumericalError("worst_case_expectation: LP iteration limit");
  }
}

double worst_case_expectation_free(const RowVector& a,
                                   const WassersteinBall& ball) {
  ball.validate();
  require(a.size() == ball.center.dim(),
          "worst_case_expectation_free: functional size mismatch");
  const double mean_term = a.dot(ball.center.mean());
  return mean_term + ball.eps * dual_vector_norm(a.transpose(), ball.ground_norm);
}

double solve_assignment(const Matrix& cost, std::vector<int>& row_to_col) {
  const int n = static_cast<int>(cost.rows());
  require(cost.cols() == n && n >= 1, "assignment: cost matrix must be square");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials method over a virtual 1-based frame.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  row_to_col.assign(n, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (match[j] == 0) continue;
    row_to_col[match[j] - 1] = j - 1;
    total += cost(match[j] - 1, j - 1);
  }
  return total;
}

double w1_distance(const Matrix& set_a, const Matrix& set_b, GroundNorm norm) {
  require(set_a.rows() == set_b.rows(),
          "w1_distance: sample sets must have equal cardinality");
  require(set_a.cols() == set_b.cols(), "w1_distance: dimension mismatch");
  const int m = static_cast<int>(set_a.rows());
  Matrix cost(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      cost(i, j) =
          vector_norm((set_a.row(i) - set_b.row(j)).transpose(), norm);
  std::vector<int> assignment;
  return solve_assignment(cost, assignment) / m;
}

}  // namespace drmpc
