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

#include <optional>
#include <vector>

#include "drmpc/ocp.hpp"

namespace drmpc {

/// How the feedback gains are produced inside the outer loop.
enum class GainMode { Riccati, Fixed, Zero };

struct SolverOptions {
  int max_outer_iters = 50;
  double tol_traj = 1e-6;   // relative inf-norm change of the nominal states
  double tol_beta = 1e-8;   // absolute inf-norm change of the back-offs
  GainMode gain_mode = GainMode::Riccati;
  Matrix fixed_gain;        // used in Fixed mode
  int threads = 1;
  OcpOptions ocp;
  bool verbose = false;

  void validate() const {
    require(max_outer_iters >= 1, "solver options: iteration cap must be >= 1");
    require(tol_traj > 0.0 && tol_beta > 0.0,
            "solver options: tolerances must be positive");
  }
};

enum class DrStatus { Converged, NonConvergence, Infeasible };

struct OuterIterationDiagnostics {
  int iteration = 0;
  double objective = 0.0;
  double beta_max = 0.0;
  double traj_change = 0.0;   // relative, vs previous outer iterate
  double beta_change = 0.0;   // absolute, vs previous outer iterate
  double ocp_kkt = 0.0;
  int ocp_iterations = 0;
};

struct DrSolution {
  NominalTrajectory traj;
  GainSchedule gains;
  BackoffSchedule beta;
  DrStatus status = DrStatus::NonConvergence;
  int outer_iterations = 0;
  std::vector<OuterIterationDiagnostics> diagnostics;
  double objective = 0.0;
};

/// Zero-feedforward rollout under the stationary gain of the linearization
/// at the origin. The default initial guess for solve().
NominalTrajectory default_initial_trajectory(const DiscreteModel& model,
                                             const CostWeights& weights,
                                             const Vector& x0, int horizon);

/// The outer fixed-point loop: linearize along the iterate, compute gains
/// (per mode), compute back-offs, solve the tightened plan, repeat until
/// both the trajectory and the back-offs stop moving or the cap is hit.
DrSolution solve(const DiscreteModel& model, const CostWeights& weights,
                 const LinearStateConstraints& cons,
                 const WassersteinBall& ball, const SupportPolytope& support,
                 const Vector& x0, int horizon, const SolverOptions& opts,
                 const std::optional<NominalTrajectory>& init = std::nullopt);

/// One receding-horizon step: shift the previous plan by one stage, re-solve
/// from the measured state, and return the input to apply now.
struct MpcStep {
  Vector input;
  DrSolution solution;
};
MpcStep mpc_step(const DiscreteModel& model, const CostWeights& weights,
                 const LinearStateConstraints& cons,
                 const WassersteinBall& ball, const SupportPolytope& support,
                 const Vector& measured_state, const DrSolution& previous,
                 const SolverOptions& opts);

}  // namespace drmpc
