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

#include "drmpc/backoff.hpp"
#include "drmpc/model.hpp"
#include "drmpc/riccati.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Nominal plan: N+1 states z, N inputs v, N feedforward terms c with
/// v_i = K_i z_i + c_i and z_{i+1} = step(z_i, v_i).
struct NominalTrajectory {
  std::vector<Vector> z;
  std::vector<Vector> v;
  std::vector<Vector> c;

  int horizon() const { return static_cast<int>(v.size()); }
};

/// Roll out the feedback policy u = K z + c from x0 and return the
/// consistent trajectory.
NominalTrajectory rollout_feedforward(const DiscreteModel& model,
                                      const GainSchedule& gains,
                                      const std::vector<Vector>& c,
                                      const Vector& x0);

/// Largest dynamics residual max_i |z_{i+1} - step(z_i, v_i)|_inf.
double rollout_residual(const DiscreteModel& model,
                        const NominalTrajectory& traj);

enum class OcpStatus { Optimal, MaxIter, Infeasible };

struct OcpOptions {
  int max_iterations = 100;
  double kkt_tolerance = 1e-6;
  double constraint_tolerance = 1e-6;
  double penalty_weight = 1e4;    // exact l1 penalty on constraint violation
  double penalty_max = 1e9;       // escalation ceiling before Infeasible
  double levenberg_initial = 1e-8;
  int qp_max_sweeps = 4000;
};

struct OcpSolution {
  NominalTrajectory traj;
  double objective = 0.0;
  double kkt_residual = 0.0;
  double max_violation = 0.0;
  OcpStatus status = OcpStatus::MaxIter;
  int iterations = 0;
  int worst_step = -1;  // violating (step, row) when infeasible
  int worst_row = -1;
  // Accepted-iterate (penalty weight, merit) pairs. The merit is
  // non-increasing over stretches where the penalty weight stays constant.
  std::vector<std::pair<double, double>> merit_history;
};

/// Solve the tightened plan for fixed gains and back-offs:
///   min  sum_i (z_i' Q z_i + v_i' R v_i) + z_N' Qf z_N
///   s.t. z_{i+1} = step(z_i, v_i),  v_i = K_i z_i + c_i,
///        [F]_n z_i <= [f]_n - beta_{i,n}  for i = 1..N.
/// Single-shooting SQP in the feedforward terms c, condensed convex QP per
/// iteration (soft one-sided slacks, exact l1 penalty, solved through its
/// box-constrained dual), backtracking line search on the l1 merit.
OcpSolution solve_tightened_ocp(const DiscreteModel& model,
                                const CostWeights& weights,
                                const LinearStateConstraints& cons,
                                const BackoffSchedule& beta,
                                const GainSchedule& gains, const Vector& x0,
                                const NominalTrajectory& warm,
                                const OcpOptions& options = {});

/// Objective value of a trajectory under the weights.
double trajectory_objective(const NominalTrajectory& traj,
                            const CostWeights& weights);

}  // namespace drmpc
