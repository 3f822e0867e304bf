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

#include "drmpc/drilqr.hpp"

#include <iostream>
#include <limits>

namespace drmpc {
namespace {

GainSchedule gains_for_mode(const LtvSystem& ltv, const CostWeights& weights,
                            const SolverOptions& opts) {
  const int n = ltv.horizon();
  GainSchedule gains;
  switch (opts.gain_mode) {
    case GainMode::Riccati:
      return riccati_gains(ltv, weights);
    case GainMode::Fixed:
      require(opts.fixed_gain.rows() == ltv.n_u() &&
                  opts.fixed_gain.cols() == ltv.n_x(),
              "solve: fixed gain has the wrong shape");
      gains.K.assign(n, opts.fixed_gain);
      return gains;
    case GainMode::Zero:
      gains.K.assign(n, Matrix::Zero(ltv.n_u(), ltv.n_x()));
      return gains;
  }
  throw InvalidInput("solve: unknown gain mode");
}

double relative_state_change(const NominalTrajectory& current,
                             const NominalTrajectory& previous) {
  double diff = 0.0;
  double scale = 1.0;
  for (size_t i = 0; i < current.z.size(); ++i) {
    diff = std::max(diff,
                    (current.z[i] - previous.z[i]).cwiseAbs().maxCoeff());
    scale = std::max(scale, current.z[i].cwiseAbs().maxCoeff());
  }
  return diff / scale;
}

}  // namespace

NominalTrajectory default_initial_trajectory(const DiscreteModel& model,
                                             const CostWeights& weights,
                                             const Vector& x0, int horizon) {
  const Vector z_eq = Vector::Zero(model.n_x());
  const Vector v_eq = Vector::Zero(model.n_u());
  auto [a0, b0] = jacobians(model, z_eq, v_eq);
  const StationaryLqr eq = stationary_lqr(a0, b0, weights);
  GainSchedule gains;
  gains.K.assign(horizon, eq.K);
  const std::vector<Vector> zero_ff(horizon, Vector::Zero(model.n_u()));
  return rollout_feedforward(model, gains, zero_ff, x0);
}

DrSolution solve(const DiscreteModel& model, const CostWeights& weights,
                 const LinearStateConstraints& cons,
                 const WassersteinBall& ball, const SupportPolytope& support,
                 const Vector& x0, int horizon, const SolverOptions& opts,
                 const std::optional<NominalTrajectory>& init) {
  opts.validate();
  require(horizon >= 1, "solve: horizon must be positive");
  weights.validate(model.n_x(), model.n_u());
  cons.validate(model.n_x());
  ball.validate();

  DrSolution out;
  NominalTrajectory traj =
      init.has_value() ? *init
                       : default_initial_trajectory(model, weights, x0, horizon);
  require(traj.horizon() == horizon, "solve: initial trajectory horizon mismatch");

  std::optional<Matrix> previous_beta;
  std::optional<NominalTrajectory> previous_traj;

  for (int outer = 1; outer <= opts.max_outer_iters; ++outer) {
    out.outer_iterations = outer;

    const LtvSystem ltv = ltv_along(model, traj);
    out.gains = gains_for_mode(ltv, weights, opts);
    out.beta =
        compute_backoffs(cons, ltv, out.gains, ball, support, opts.threads);

    OcpSolution ocp_sol = solve_tightened_ocp(model, weights, cons, out.beta,
                                              out.gains, x0, traj, opts.ocp);
    if (ocp_sol.status == OcpStatus::Infeasible) {
      out.traj = ocp_sol.traj;
      out.objective = ocp_sol.objective;
      out.status = DrStatus::Infeasible;
      if (opts.verbose)
        std::cerr << "outer " << outer << ": tightened plan infeasible at step "
                  << ocp_sol.worst_step << ", row " << ocp_sol.worst_row
                  << "\n";
      return out;
    }

    OuterIterationDiagnostics diag;
    diag.iteration = outer;
    diag.objective = ocp_sol.objective;
    diag.beta_max = out.beta.beta.maxCoeff();
    diag.ocp_kkt = ocp_sol.kkt_residual;
    diag.ocp_iterations = ocp_sol.iterations;
    diag.traj_change = previous_traj.has_value()
                           ? relative_state_change(ocp_sol.traj, *previous_traj)
                           : std::numeric_limits<double>::infinity();
    diag.beta_change =
        previous_beta.has_value()
            ? (out.beta.beta - *previous_beta).cwiseAbs().maxCoeff()
            : std::numeric_limits<double>::infinity();
    out.diagnostics.push_back(diag);
    if (opts.verbose)
      std::cerr << "outer " << outer << ": objective " << diag.objective
                << ", max back-off " << diag.beta_max << ", traj change "
                << diag.traj_change << ", back-off change " << diag.beta_change
                << "\n";

    previous_beta = out.beta.beta;
    previous_traj = traj;
    traj = ocp_sol.traj;
    out.traj = traj;
    out.objective = ocp_sol.objective;

    if (diag.traj_change <= opts.tol_traj && diag.beta_change <= opts.tol_beta) {
      out.status = DrStatus::Converged;
      return out;
    }
  }
  out.status = DrStatus::NonConvergence;
  return out;
}

MpcStep mpc_step(const DiscreteModel& model, const CostWeights& weights,
                 const LinearStateConstraints& cons,
                 const WassersteinBall& ball, const SupportPolytope& support,
                 const Vector& measured_state, const DrSolution& previous,
                 const SolverOptions& opts) {
  const int n = previous.traj.horizon();
  require(n >= 1, "mpc_step: previous solution is empty");

  // Shift the previous plan by one stage, repeat the last feedforward as
  // zero, and re-roll from the measurement.
  NominalTrajectory warm;
  warm.c.assign(previous.traj.c.begin() + 1, previous.traj.c.end());
  warm.c.push_back(Vector::Zero(model.n_u()));
  GainSchedule shifted;
  shifted.K.assign(previous.gains.K.begin() + 1, previous.gains.K.end());
  shifted.K.push_back(previous.gains.K.back());
  warm = rollout_feedforward(model, shifted, warm.c, measured_state);

  MpcStep step;
  step.solution = solve(model, weights, cons, ball, support, measured_state, n,
                        opts, warm);
  step.input = step.solution.gains.K[0] * measured_state +
               step.solution.traj.c[0];
  return step;
}

}  // namespace drmpc
