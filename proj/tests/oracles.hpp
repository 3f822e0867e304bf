// Test-only reference implementations, independent of the library code
// paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "drmpc/types.hpp"

namespace oracles {

using drmpc::Matrix;
using drmpc::Vector;

// Truncated matrix-exponential series sum_{j<=order} (hA)^j / j!.
inline Matrix expm_truncated(const Matrix& a, double h, int order) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int j = 1; j <= order; ++j) {
    term = term * (h * a) / j;
    sum += term;
  }
  return sum;
}

// Worst-case expectation of a*w over the 1-D ball around a single atom,
// brute-forced over two-point distributions with atoms on a uniform grid
// spanning the support. The transported mass fraction is optimized exactly
// per atom pair (the transport cost is linear in it).
inline double wce_1d_two_point_grid(double lo, double hi, double atom,
                                    double eps, double a, int grid = 201) {
  double best = a * atom;  // staying put is always feasible
  auto grid_point = [&](int i) {
    return lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
  };
  for (int i = 0; i < grid; ++i) {
    const double w1 = grid_point(i);
    const double c1 = std::abs(w1 - atom);
    for (int j = 0; j < grid; ++j) {
      const double w2 = grid_point(j);
      const double c2 = std::abs(w2 - atom);
      // mass p sits at w2, 1-p at w1; cost (1-p) c1 + p c2 <= eps
      double p_lo = 0.0, p_hi = 1.0;
      if (std::abs(c2 - c1) < 1e-15) {
        if (c1 > eps + 1e-15) continue;
      } else if (c2 > c1) {
        p_hi = std::min(1.0, (eps - c1) / (c2 - c1));
        if (c1 > eps + 1e-15) continue;
      } else {
        p_lo = std::max(0.0, (eps - c1) / (c2 - c1));
        if (p_lo > 1.0 + 1e-15) continue;
      }
      if (p_lo > p_hi) continue;
      for (const double p : {p_lo, p_hi}) {
        const double value = a * ((1.0 - p) * w1 + p * w2);
        best = std::max(best, value);
      }
    }
  }
  return best;
}

// Closed-form worst-case expectation for an axis-aligned box support under
// the 1-norm ground metric: the dual is piecewise linear in the single
// norm multiplier, so scanning its breakpoints is exact.
inline double wce_box_breakpoints(const Vector& a, const Matrix& samples,
                                  double eps, const Vector& lo,
                                  const Vector& hi) {
  std::vector<double> breakpoints{0.0};
  for (int j = 0; j < a.size(); ++j) breakpoints.push_back(std::abs(a[j]));
  double best = std::numeric_limits<double>::infinity();
  for (const double lambda : breakpoints) {
    double total = 0.0;
    for (int l = 0; l < samples.rows(); ++l) {
      const Vector w = samples.row(l).transpose();
      double s = a.dot(w);
      for (int j = 0; j < a.size(); ++j) {
        s += std::max(0.0, a[j] - lambda) * (hi[j] - w[j]);
        s += std::max(0.0, -a[j] - lambda) * (w[j] - lo[j]);
      }
      total += s;
    }
    best = std::min(best, lambda * eps + total / samples.rows());
  }
  return best;
}

// Exhaustive minimum-cost matching by permutation enumeration. Only viable
// for tiny sets.
inline double emd_by_permutations(const Matrix& set_a, const Matrix& set_b,
                                  drmpc::GroundNorm norm) {
  const int m = static_cast<int>(set_a.rows());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < m; ++i)
      cost += drmpc::vector_norm(
          (set_a.row(i) - set_b.row(perm[i])).transpose(), norm);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / m;
}

// Exhaustive grid search refined level by level until the cell spacing
// drops below `resolution`. Each level re-grids a box around the incumbent
// with a margin of two previous cells, so a minimizer near a cell border is
// not lost. Assumes the objective is continuous.
inline Vector grid_search_refine(
    const std::function<double(const Vector&)>& objective, Vector lo,
    Vector hi, double resolution, int points_per_dim = 13) {
  const int dim = static_cast<int>(lo.size());
  Vector best_point = 0.5 * (lo + hi);
  while (true) {
    const double spacing = (hi - lo).maxCoeff() / (points_per_dim - 1);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(dim, 0);
    const long total = static_cast<long>(std::pow(points_per_dim, dim));
    Vector point(dim);
    for (long cell = 0; cell < total; ++cell) {
      long rem = cell;
      for (int d = 0; d < dim; ++d) {
        const int i = static_cast<int>(rem % points_per_dim);
        rem /= points_per_dim;
        point[d] = lo[d] + (hi[d] - lo[d]) * i / (points_per_dim - 1);
      }
      const double value = objective(point);
      if (value < best) {
        best = value;
        best_point = point;
      }
    }
    if (spacing <= resolution) break;
    const double margin = 2.0 * spacing;
    for (int d = 0; d < dim; ++d) {
      lo[d] = best_point[d] - margin;
      hi[d] = best_point[d] + margin;
    }
  }
  return best_point;
}

}  // namespace oracles
