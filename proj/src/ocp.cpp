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

#include "drmpc/ocp.hpp"

#include <cmath>
#include <limits>

namespace drmpc {
namespace {

constexpr double kZeroRowTol = 1e-14;

struct Linearization {
  Vector gradient;        // of the objective w.r.t. c
  Matrix hessian;         // Gauss-Newton + damping
  Matrix constraints;     // G: rows (i, n) over i = 1..N
  Vector slack;           // d: f - beta - F z  (>= 0 means satisfied)
};

double merit_violation(const NominalTrajectory& traj,
                       const LinearStateConstraints& cons,
                       const BackoffSchedule& beta, double* max_violation,
                       int* worst_step, int* worst_row) {
  const int n = traj.horizon();
  double total = 0.0;
  double worst = 0.0;
  if (worst_step) *worst_step = -1;
  if (worst_row) *worst_row = -1;
  for (int i = 1; i <= n; ++i) {
    const Vector margin =
        cons.F * traj.z[i] - (cons.f - beta.beta.row(i).transpose());
    for (int r = 0; r < margin.size(); ++r) {
      const double v = std::max(0.0, margin[r]);
      total += v;
      if (v > worst) {
        worst = v;
        if (worst_step) *worst_step = i;
        if (worst_row) *worst_row = r;
      }
    }
  }
  if (max_violation) *max_violation = worst;
  return total;
}

// Box-constrained dual of the slack QP, solved by cyclic coordinate descent:
//   min_mu  0.5 mu' Qd mu + qd' mu   s.t.  0 <= mu <= rho.
// Rows of G that are numerically zero get their multiplier pinned.
void solve_dual_qp(const Matrix& qd_mat, const Vector& qd_vec, double rho,
                   const std::vector<char>& zero_row, const Vector& slack,
                   int max_sweeps, Vector& mu) {
  const int m = static_cast<int>(qd_vec.size());
  for (int j = 0; j < m; ++j) {
    if (zero_row[j]) mu[j] = slack[j] < 0.0 ? rho : 0.0;
    mu[j] = std::min(std::max(mu[j], 0.0), rho);
  }
  Vector grad = qd_mat * mu + qd_vec;
  const double tol = 1e-12 * std::max(1.0, qd_vec.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
      if (zero_row[j]) continue;
      const double diag = std::max(qd_mat(j, j), 1e-14);
      const double target = std::min(std::max(mu[j] - grad[j] / diag, 0.0), rho);
      const double delta = target - mu[j];
      if (delta != 0.0) {
        mu[j] = target;
        grad.noalias() += delta * qd_mat.col(j);
      }
      // projected-gradient measure at the updated coordinate
      double pg = grad[j];
      if (mu[j] <= 0.0) pg = std::min(pg, 0.0);
      if (mu[j] >= rho) pg = std::max(pg, 0.0);
      worst = std::max(worst, std::abs(pg));
    }
    if (worst < tol) break;
  }
}

}  // namespace

NominalTrajectory rollout_feedforward(const DiscreteModel& model,
                                      const GainSchedule& gains,
                                      const std::vector<Vector>& c,
                                      const Vector& x0) {
  const int n = gains.horizon();
  require(static_cast<int>(c.size()) == n,
          "rollout_feedforward: feedforward length mismatch");
  NominalTrajectory traj;
  traj.z.resize(n + 1);
  traj.v.resize(n);
  traj.c = c;
  traj.z[0] = x0;
  for (int i = 0; i < n; ++i) {
    traj.v[i] = gains.K[i] * traj.z[i] + c[i];
    traj.z[i + 1] = model.step(traj.z[i], traj.v[i]);
  }
  return traj;
}

double rollout_residual(const DiscreteModel& model,
                        const NominalTrajectory& traj) {
  double worst = 0.0;
  for (int i = 0; i < traj.horizon(); ++i) {
    const Vector predicted = model.step(traj.z[i], traj.v[i]);
    worst = std::max(worst,
                     (traj.z[i + 1] - predicted).cwiseAbs().maxCoeff());
  }
  return worst;
}

double trajectory_objective(const NominalTrajectory& traj,
                            const CostWeights& weights) {
  double value = 0.0;
  const int n = traj.horizon();
  for (int i = 0; i < n; ++i) {
    value += traj.z[i].dot(weights.Q * traj.z[i]);
    value += traj.v[i].dot(weights.R * traj.v[i]);
  }
  value += traj.z[n].dot(weights.Qf * traj.z[n]);
  return value;
}

OcpSolution solve_tightened_ocp(const DiscreteModel& model,
                                const CostWeights& weights,
                                const LinearStateConstraints& cons,
                                const BackoffSchedule& beta,
                                const GainSchedule& gains, const Vector& x0,
                                const NominalTrajectory& warm,
                                const OcpOptions& options) {
  const int n = gains.horizon();
  const int nx = model.n_x();
  const int nu = model.n_u();
  const int nc = n * nu;           // decision variables
  const int n_f = cons.rows();
  const int mc = n * n_f;          // constraint rows, steps 1..N
  require(beta.horizon() == n, "solve_tightened_ocp: back-off horizon mismatch");
  require(x0.size() == nx, "solve_tightened_ocp: initial state size mismatch");
  cons.validate(nx);
  weights.validate(nx, nu);

  // Warm start: re-express the warm trajectory as feedforward terms for the
  // given gains and re-roll so the iterate is dynamics-consistent.
  std::vector<Vector> c(n, Vector::Zero(nu));
  if (static_cast<int>(warm.v.size()) == n &&
      static_cast<int>(warm.z.size()) == n + 1) {
    for (int i = 0; i < n; ++i) c[i] = warm.v[i] - gains.K[i] * warm.z[i];
  }

  OcpSolution out;
  NominalTrajectory traj = rollout_feedforward(model, gains, c, x0);

  double damping = options.levenberg_initial;
  double rho = options.penalty_weight;
  Vector mu = Vector::Zero(mc);

  auto merit = [&](const NominalTrajectory& t) {
    return trajectory_objective(t, weights) +
           rho * merit_violation(t, cons, beta, nullptr, nullptr, nullptr);
  };

  std::vector<Matrix> sens(n + 1);  // dz_i/dc
  Matrix input_sens(nu, nc);        // dv_i/dc, reused per step

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;

    // Sensitivities of the single-shooting rollout.
    sens[0] = Matrix::Zero(nx, nc);
    Vector gradient = Vector::Zero(nc);
    Matrix hessian = damping * Matrix::Identity(nc, nc);
    for (int i = 0; i < n; ++i) {
      auto [a, b] = jacobians(model, traj.z[i], traj.v[i]);
      input_sens.noalias() = gains.K[i] * sens[i];
      input_sens.block(0, i * nu, nu, nu) += Matrix::Identity(nu, nu);
      gradient.noalias() += 2.0 * sens[i].transpose() * (weights.Q * traj.z[i]);
      gradient.noalias() +=
          2.0 * input_sens.transpose() * (weights.R * traj.v[i]);
      hessian.noalias() +=
          2.0 * sens[i].transpose() * (weights.Q * sens[i]);
      hessian.noalias() +=
          2.0 * input_sens.transpose() * (weights.R * input_sens);
      sens[i + 1].noalias() = a * sens[i] + b * input_sens;
    }
    gradient.noalias() += 2.0 * sens[n].transpose() * (weights.Qf * traj.z[n]);
    hessian.noalias() += 2.0 * sens[n].transpose() * (weights.Qf * sens[n]);

    // Tightened constraints linearized at the current rollout.
    Matrix g_mat(mc, nc);
    Vector slack(mc);
    std::vector<char> zero_row(mc, 0);
    for (int i = 1; i <= n; ++i) {
      for (int r = 0; r < n_f; ++r) {
        const int row = (i - 1) * n_f + r;
        g_mat.row(row) = cons.F.row(r) * sens[i];
        slack[row] = cons.f[r] - beta.beta(i, r) - cons.F.row(r).dot(traj.z[i]);
        if (g_mat.row(row).cwiseAbs().maxCoeff() < kZeroRowTol)
          zero_row[row] = 1;
      }
    }

    Eigen::LLT<Matrix> hess_llt(hessian);
    if (hess_llt.info() != Eigen::Success)
      throw NumericalError("solve_tightened_ocp: Hessian factorization failed");
    const Matrix h_inv_gt = hess_llt.solve(g_mat.transpose());
    const Vector h_inv_g = hess_llt.solve(gradient);
    const Matrix qd_mat = g_mat * h_inv_gt;
    const Vector qd_vec = g_mat * h_inv_g + slack;

    solve_dual_qp(qd_mat, qd_vec, rho, zero_row, slack, options.qp_max_sweeps,
                  mu);
    const Vector step = -(h_inv_g + h_inv_gt * mu);

    // Exact-penalty escalation: the QP prefers to keep violating only when
    // multipliers saturate at rho.
    const Vector predicted = g_mat * step - slack;
    const bool saturated = mc > 0 && mu.maxCoeff() >= 0.999 * rho;
    if (predicted.size() > 0 &&
        predicted.maxCoeff() > options.constraint_tolerance && saturated) {
      if (rho < options.penalty_max) {
        rho *= 10.0;
        continue;
      }
    }

    const double stationarity = (gradient + g_mat.transpose() * mu)
                                    .cwiseAbs()
                                    .maxCoeff();
    double current_violation = 0.0;
    merit_violation(traj, cons, beta, &current_violation, &out.worst_step,
                    &out.worst_row);
    out.kkt_residual = std::max(stationarity, current_violation);

    if (stationarity <= options.kkt_tolerance &&
        current_violation <= options.constraint_tolerance) {
      out.status = OcpStatus::Optimal;
      break;
    }
    if (current_violation > options.constraint_tolerance &&
        rho >= options.penalty_max &&
        step.cwiseAbs().maxCoeff() < 1e-12) {
      out.status = OcpStatus::Infeasible;
      break;
    }

    // Backtracking line search on the l1 merit.
    const double merit_now = merit(traj);
    const double viol_l1 =
        merit_violation(traj, cons, beta, nullptr, nullptr, nullptr);
    const double descent = std::min(gradient.dot(step) - rho * viol_l1, 0.0);
    double alpha = 1.0;
    bool accepted = false;
    NominalTrajectory candidate;
    while (alpha > 1e-12) {
      std::vector<Vector> c_try(n);
      for (int i = 0; i < n; ++i)
        c_try[i] = traj.c[i] + alpha * step.segment(i * nu, nu);
      try {
        candidate = rollout_feedforward(model, gains, c_try, x0);
      } catch (const NumericalError&) {
        alpha *= 0.5;  // rollout blew up, shorten the step
        continue;
      }
      if (merit(candidate) <= merit_now + 1e-4 * alpha * descent) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }

    if (!accepted) {
      damping *= 10.0;
      if (damping > 1e12) {
        out.status = current_violation > options.constraint_tolerance &&
                             rho >= options.penalty_max
                         ? OcpStatus::Infeasible
                         : OcpStatus::MaxIter;
        break;
      }
      continue;
    }

    traj = candidate;
    damping = std::max(damping * 0.5, options.levenberg_initial);
    out.merit_history.emplace_back(rho, merit(traj));

    if (step.cwiseAbs().maxCoeff() * alpha < 1e-14) {
      // Step length at numerical noise level without meeting the KKT test.
      double viol_inf = 0.0;
      merit_violation(traj, cons, beta, &viol_inf, &out.worst_step,
                      &out.worst_row);
      out.status = viol_inf > options.constraint_tolerance &&
                           rho >= options.penalty_max
                       ? OcpStatus::Infeasible
                       : OcpStatus::MaxIter;
      out.kkt_residual = std::max(stationarity, viol_inf);
      break;
    }
  }

  out.traj = traj;
  out.objective = trajectory_objective(traj, weights);
  merit_violation(traj, cons, beta, &out.max_violation, &out.worst_step,
                  &out.worst_row);
  if (out.status == OcpStatus::MaxIter &&
      out.max_violation > options.constraint_tolerance &&
      rho >= options.penalty_max)
    out.status = OcpStatus::Infeasible;
  return out;
}

}  // namespace drmpc
