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

#include "drmpc/ambiguity.hpp"
#include "drmpc/linearize.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Linear state constraints F z <= f, one row per constraint.
struct LinearStateConstraints {
  Matrix F;
  Vector f;

  int rows() const { return static_cast<int>(F.rows()); }
  void validate(int n_x) const {
    require(F.rows() >= 1, "constraints: need at least one row");
    require(F.cols() == n_x, "constraints: column count mismatch");
    require(F.allFinite() && f.allFinite() && f.size() == F.rows(),
            "constraints: non-finite or mismatched data");
  }
};

/// Per-step, per-row tightening amounts. Row i holds the back-offs applied
/// at predicted step i; step 0 carries no disturbance terms and is zero.
/// Entries may be negative when the sample mean is nonzero.
struct BackoffSchedule {
  Matrix beta;  // (N+1) x n_F

  int horizon() const { return static_cast<int>(beta.rows()) - 1; }
  double max_abs() const { return beta.cwiseAbs().maxCoeff(); }
};

/// beta_{i,n} = sum over m < i of the worst-case expectation of
/// [F]_n phi(i,m) w. Each (i, n, m) term is one independent LP; the grid may
/// be evaluated on several threads and is assembled in index order.
BackoffSchedule compute_backoffs(const LinearStateConstraints& cons,
                                 const LtvSystem& ltv,
                                 const GainSchedule& gains,
                                 const WassersteinBall& ball,
                                 const SupportPolytope& support,
                                 int threads = 1);

/// Same, reusing a prebuilt transition table.
BackoffSchedule compute_backoffs(const LinearStateConstraints& cons,
                                 const TransitionTable& table,
                                 const WassersteinBall& ball,
                                 const SupportPolytope& support,
                                 int threads = 1);

}  // namespace drmpc
