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

#include "drmpc/linearize.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Per-output remainder bound for one deviation: |[dx; du]|_inf^2 * mu_n.
/// Diagnostic only; not folded into the constraint tightening.
Vector remainder_bound(const Vector& mu, const Vector& dx, const Vector& du);

/// Forward recursions from zero initial conditions:
///   disturbance part   e_{i+1}   = A_cl,i e_i   + w_i
///   linearization part eps_{i+1} = A_cl,i eps_i + r_i
/// Their sum reproduces the full deviation from the nominal trajectory when
/// r is the true linearization residual.
struct SplitErrorPaths {
  std::vector<Vector> disturbance;    // e_0..e_N
  std::vector<Vector> linearization;  // eps_0..eps_N
};
SplitErrorPaths split_error_rollout(const LtvSystem& ltv,
                                    const GainSchedule& gains,
                                    const std::vector<Vector>& disturbances,
                                    const std::vector<Vector>& remainders);

/// Evaluates (|[e; K e]|_inf + |[eps; K eps]|_inf)^2 * mu_n per step and
/// output, on realized error paths.
Matrix error_split_bound(const Vector& mu, const GainSchedule& gains,
                         const std::vector<Vector>& e_path,
                         const std::vector<Vector>& eps_path);

}  // namespace drmpc
