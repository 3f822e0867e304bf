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

#include "drmpc/linearize.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Quadratic stage and terminal penalties. Q and Qf must be symmetric
/// positive semidefinite, R symmetric positive definite.
struct CostWeights {
  Matrix Q;
  Matrix R;
  Matrix Qf;

  void validate(int n_x, int n_u) const;
};

/// Backward Riccati sweep over the LTV system:
///   P_N = Qf
///   K_i = -(R + B_i' P_{i+1} B_i)^{-1} B_i' P_{i+1} A_i
///   P_i = Q + K_i' R K_i + (A_i + B_i K_i)' P_{i+1} (A_i + B_i K_i)
/// P is symmetrized every step. The gain includes the minus sign, matching
/// the policy u = K x + c.
GainSchedule riccati_gains(const LtvSystem& ltv, const CostWeights& weights);

/// Fixed point of the time-invariant recursion, iterated until
/// |P - P_next|_inf < tol. Used for stationary gains and terminal weights.
struct StationaryLqr {
  Matrix K;
  Matrix P;
  int iterations = 0;
};
StationaryLqr stationary_lqr(const Matrix& A, const Matrix& B,
                             const CostWeights& weights, double tol = 1e-12,
                             int max_iters = 100000);

}  // namespace drmpc
