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

#include "drmpc/types.hpp"

namespace drmpc {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double value = 0.0;
  Vector x;
  int iterations = 0;
};

/// Solves   min c'x  s.t.  A_ub x <= b_ub,  x free,
/// by a dense two-phase tableau simplex. Free variables are split
/// internally. Entering rule is Dantzig with lowest-index tie break;
/// Bland's rule takes over after a degeneracy streak so the method cannot
/// cycle. Feasibility and optimality tolerances are 1e-8; the iteration cap
/// is 10 * (rows + standard-form columns) per phase and hitting it is
/// reported, never silently truncated.
LpSolution lp_solve(const Vector& c, const Matrix& A_ub, const Vector& b_ub);

}  // namespace drmpc
