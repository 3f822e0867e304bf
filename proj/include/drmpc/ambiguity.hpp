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

#pragma once

#include <vector>

#include "drmpc/lp.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Polyhedral support { w : H w <= h }. Must be nonempty and bounded.
struct SupportPolytope {
  Matrix H;
  Vector h;

  int dim() const { return static_cast<int>(H.cols()); }
  int rows() const { return static_cast<int>(H.rows()); }

  bool contains(const Vector& w, double tol = 1e-9) const {
    return ((H * w - h).array() <= tol).all();
  }

  /// LP feasibility plus boundedness probes along +/- every coordinate axis.
  void validate() const;
};

/// Axis-aligned box as a polytope: rows [I; -I], bounds [upper; -lower].
SupportPolytope box_support(const Vector& lower, const Vector& upper);

/// Uniform mixture of Dirac masses at the stored samples (one per row).
struct EmpiricalDistribution {
  Matrix samples;  // M x n

  int count() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  Vector mean() const { return samples.colwise().mean().transpose(); }
};

/// Transport ball of radius eps around an empirical distribution, type-1
/// metric with the chosen ground norm.
struct WassersteinBall {
  EmpiricalDistribution center;
  double eps = 0.0;
  GroundNorm ground_norm = GroundNorm::One;

  void validate() const {
    require(center.count() >= 1, "ball: need at least one sample");
    require(eps >= 0.0, "ball: radius must be nonnegative");
    require(center.samples.allFinite(), "ball: non-finite samples");
  }
};

/// Exact worst-case expectation of the linear functional w -> a.w over the
/// ball restricted to the support, computed as one dense LP with an
/// independent multiplier block per sample.
double worst_case_expectation(const RowVector& a, const WassersteinBall& ball,
                              const SupportPolytope& support);

/// Closed form for unconstrained support: sample mean of a.w plus
/// eps times the dual norm of a. Cross-check for the LP route.
double worst_case_expectation_free(const RowVector& a,
                                   const WassersteinBall& ball);

/// Exact type-1 distance between two equal-cardinality uniform sample sets:
/// 1/M times the cost of a minimum-cost perfect matching under the ground
/// norm, solved by the Jonker-Volgenant style potentials algorithm.
double w1_distance(const Matrix& set_a, const Matrix& set_b, GroundNorm norm);

/// Min-cost perfect assignment on a square cost matrix; returns the column
/// assigned to each row and the total cost.
double solve_assignment(const Matrix& cost, std::vector<int>& row_to_col);

}  // namespace drmpc
