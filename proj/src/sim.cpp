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

#include "drmpc/sim.hpp"

#include <cmath>

namespace drmpc {
namespace {

// Recognize a polytope built by box_support and recover its bounds.
bool box_bounds(const SupportPolytope& support, Vector& lower, Vector& upper) {
  const int n = support.dim();
  if (support.rows() != 2 * n) return false;
  if (!support.H.topRows(n).isApprox(Matrix::Identity(n, n))) return false;
  if (!support.H.bottomRows(n).isApprox(-Matrix::Identity(n, n))) return false;
  upper = support.h.head(n);
  lower = -support.h.tail(n);
  return true;
}

}  // namespace

void DisturbanceSampler::validate(const SupportPolytope& support) const {
  require(lower.size() == upper.size() && lower.size() >= 1,
          "sampler: bound size mismatch");
  require((lower.array() <= upper.array()).all(),
          "sampler: lower bound exceeds upper bound");
  require(support.dim() == dim(), "sampler: support dimension mismatch");
  // Every corner of the sampling box must lie in the support.
  const int n = dim();
  for (long mask = 0; mask < (1L << n); ++mask) {
    Vector corner(n);
    for (int d = 0; d < n; ++d)
      corner[d] = (mask >> d) & 1 ? upper[d] : lower[d];
    require(support.contains(corner),
            "sampler: bounds are not contained in the support");
  }
}

std::vector<Vector> DisturbanceSampler::sequence(std::uint64_t seed,
                                                 int steps) const {
  Xoshiro256pp rng(seed);
  std::vector<Vector> out(steps, Vector(dim()));
  for (int i = 0; i < steps; ++i)
    for (int d = 0; d < dim(); ++d)
      out[i][d] = rng.uniform(lower[d], upper[d]);
  return out;
}

std::string ModeSpec::name() const {
  switch (mode) {
    case GainMode::Riccati: return "riccati";
    case GainMode::Fixed: return "fixed";
    case GainMode::Zero: return "zero";
  }
  return "unknown";
}

Matrix ModeSpec::gain_at(const DrSolution& solution, int step) const {
  switch (mode) {
    case GainMode::Riccati:
      return solution.gains.K[step];
    case GainMode::Fixed:
      require(fixed_gain.size() > 0, "mode: fixed gain not set");
      return fixed_gain;
    case GainMode::Zero:
      return Matrix::Zero(solution.gains.K[step].rows(),
                          solution.gains.K[step].cols());
  }
  throw InvalidInput("mode: unknown gain mode");
}

Realization rollout(const DiscreteModel& model, const DrSolution& solution,
                    const ModeSpec& mode, const Vector& x0,
                    const DisturbanceSampler& sampler, std::uint64_t seed) {
  const int n = solution.traj.horizon();
  require(n >= 1, "rollout: empty solution");
  require(x0.size() == model.n_x(), "rollout: initial state size mismatch");

  Realization real;
  real.x.resize(n + 1);
  real.u.resize(n);
  real.w = sampler.sequence(seed, n);
  real.dx.resize(n + 1);
  real.x[0] = x0;
  real.dx[0] = x0 - solution.traj.z[0];
  for (int i = 0; i < n; ++i) {
    real.u[i] = mode.gain_at(solution, i) * real.x[i] + solution.traj.c[i];
    Vector next = model.step(real.x[i], real.u[i]) + real.w[i];
    if (!next.allFinite())
      throw NumericalError("rollout: non-finite state at step " +
                           std::to_string(i + 1));
    real.x[i + 1] = std::move(next);
    real.dx[i + 1] = real.x[i + 1] - solution.traj.z[i + 1];
  }
  return real;
}

std::vector<ModeSummary> monte_carlo(
    const DiscreteModel& model,
    const std::vector<std::pair<ModeSpec, const DrSolution*>>& runs_per_mode,
    const LinearStateConstraints& cons, const Vector& x0,
    const DisturbanceSampler& sampler, int runs, std::uint64_t base_seed) {
  require(runs >= 1, "monte_carlo: need at least one run");
  std::vector<ModeSummary> summaries;
  summaries.reserve(runs_per_mode.size());

  for (const auto& [mode, solution] : runs_per_mode) {
    require(solution != nullptr, "monte_carlo: null solution");
    const int n = solution->traj.horizon();
    ModeSummary summary;
    summary.mode = mode.name();
    summary.runs = runs;
    summary.seed = base_seed;
    summary.mean_error = Vector::Zero(n + 1);
    summary.max_error = Vector::Zero(n + 1);
    int violating_runs = 0;
    long violating_steps = 0;

    for (int r = 0; r < runs; ++r) {
      Realization real =
          rollout(model, *solution, mode, x0, sampler, base_seed + r);
      bool run_violates = false;
      for (int i = 0; i <= n; ++i) {
        const double err = real.dx[i].cwiseAbs().maxCoeff();
        summary.mean_error[i] += err / runs;
        summary.max_error[i] = std::max(summary.max_error[i], err);
        if (i >= 1 && ((cons.F * real.x[i] - cons.f).array() > 0.0).any()) {
          run_violates = true;
          ++violating_steps;
        }
      }
      if (run_violates) ++violating_runs;
      summary.realizations.push_back(std::move(real));
    }

    summary.mean_terminal = summary.mean_error[n];
    double max_term = 0.0;
    for (const auto& real : summary.realizations)
      max_term = std::max(max_term, real.dx[n].cwiseAbs().maxCoeff());
    summary.max_terminal = max_term;
    summary.violation_frequency_runs =
        static_cast<double>(violating_runs) / runs;
    summary.violation_frequency_steps =
        static_cast<double>(violating_steps) / (static_cast<double>(runs) * n);
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

CoupledErrorPaths coupled_rollouts(
    const LtvSystem& ltv, const GainSchedule& gains,
    const std::vector<std::vector<Vector>>& nominal_sequences,
    const std::vector<std::vector<Vector>>& perturbed_sequences) {
  require(nominal_sequences.size() == perturbed_sequences.size() &&
              !nominal_sequences.empty(),
          "coupled_rollouts: sample sets must be index aligned");
  const int n = ltv.horizon();
  const int n_samples = static_cast<int>(nominal_sequences.size());

  CoupledErrorPaths paths;
  paths.nominal.assign(n + 1, std::vector<Vector>(n_samples));
  paths.realized.assign(n + 1, std::vector<Vector>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    require(static_cast<int>(nominal_sequences[s].size()) == n &&
                static_cast<int>(perturbed_sequences[s].size()) == n,
            "coupled_rollouts: sequence length mismatch");
    Vector e_nom = Vector::Zero(ltv.n_x());
    Vector e_real = Vector::Zero(ltv.n_x());
    paths.nominal[0][s] = e_nom;
    paths.realized[0][s] = e_real;
    for (int i = 0; i < n; ++i) {
      const Matrix a_cl = gains.closed_loop(ltv, i);
      e_nom = a_cl * e_nom + nominal_sequences[s][i];
      e_real = a_cl * e_real + perturbed_sequences[s][i];
      paths.nominal[i + 1][s] = e_nom;
      paths.realized[i + 1][s] = e_real;
    }
  }
  return paths;
}

CoupledDraw draw_coupled_sequences(const WassersteinBall& ball,
                                   const SupportPolytope& support, int samples,
                                   int steps, std::uint64_t seed) {
  ball.validate();
  require(samples >= 1 && steps >= 1, "draw_coupled_sequences: empty draw");
  const int n = ball.center.dim();
  const int atoms = ball.center.count();

  Vector lo, hi;
  const bool is_box = box_bounds(support, lo, hi);

  Xoshiro256pp rng(seed);
  CoupledDraw draw;
  draw.nominal.assign(samples, std::vector<Vector>(steps));
  draw.perturbed.assign(samples, std::vector<Vector>(steps));
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < steps; ++i) {
      const int atom =
          std::min<int>(static_cast<int>(rng.uniform() * atoms), atoms - 1);
      const Vector w = ball.center.samples.row(atom).transpose();
      Vector direction(n);
      for (int d = 0; d < n; ++d) direction[d] = rng.uniform(-1.0, 1.0);
      const double radius = rng.uniform() * ball.eps;
      const double norm = vector_norm(direction, ball.ground_norm);
      Vector perturbed =
          norm > 1e-300 ? Vector(w + direction * (radius / norm)) : w;
      if (is_box)
        perturbed = perturbed.cwiseMax(lo).cwiseMin(hi);
      draw.nominal[s][i] = w;
      draw.perturbed[s][i] = perturbed;
    }
  }
  return draw;
}

}  // namespace drmpc
