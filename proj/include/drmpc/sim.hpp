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

#include <cstdint>
#include <string>
#include <vector>

#include "drmpc/drilqr.hpp"
#include "drmpc/rng.hpp"
#include "drmpc/tube.hpp"

namespace drmpc {

/// Seeded uniform sampler on a per-dimension box. Draw order is per step,
/// dimension major: step 0 dims 0..n-1, then step 1, and so on. Identical
/// seeds give identical streams (xoshiro256++ seeded through splitmix64).
struct DisturbanceSampler {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }

  void validate(const SupportPolytope& support) const;

  /// One length-N disturbance sequence from the given stream seed.
  std::vector<Vector> sequence(std::uint64_t seed, int steps) const;
};

/// One closed-loop rollout against a nominal plan.
struct Realization {
  std::vector<Vector> x;   // 0..N
  std::vector<Vector> u;   // 0..N-1
  std::vector<Vector> w;   // 0..N-1
  std::vector<Vector> dx;  // x_i - z_i, 0..N

  int horizon() const { return static_cast<int>(u.size()); }
};

/// Gain selection for the applied policy u = K x + c.
struct ModeSpec {
  GainMode mode = GainMode::Riccati;
  Matrix fixed_gain;  // used when mode == Fixed

  static ModeSpec riccati() { return {GainMode::Riccati, {}}; }
  static ModeSpec fixed(Matrix k) { return {GainMode::Fixed, std::move(k)}; }
  static ModeSpec zero() { return {GainMode::Zero, {}}; }

  std::string name() const;
  Matrix gain_at(const DrSolution& solution, int step) const;
};

/// Simulate the true nonlinear system under sampled disturbances and the
/// chosen feedback, recording errors against the solution's nominal states.
Realization rollout(const DiscreteModel& model, const DrSolution& solution,
                    const ModeSpec& mode, const Vector& x0,
                    const DisturbanceSampler& sampler, std::uint64_t seed);

struct ModeSummary {
  std::string mode;
  int runs = 0;
  std::uint64_t seed = 0;
  Vector mean_error;            // per step, |dx|_inf averaged over runs
  Vector max_error;             // per step, max over runs
  double mean_terminal = 0.0;
  double max_terminal = 0.0;
  // Fraction of realizations with any constraint-row excess, and the
  // fraction of (realization, step) pairs in excess.
  double violation_frequency_runs = 0.0;
  double violation_frequency_steps = 0.0;
  std::vector<Realization> realizations;  // index order, one per run
};

/// Monte-Carlo fan-out over realizations. Realization r of every mode uses
/// stream seed base_seed + r, so modes face identical disturbances and the
/// summaries are paired. Results are merged in realization index order.
std::vector<ModeSummary> monte_carlo(
    const DiscreteModel& model,
    const std::vector<std::pair<ModeSpec, const DrSolution*>>& runs_per_mode,
    const LinearStateConstraints& cons, const Vector& x0,
    const DisturbanceSampler& sampler, int runs, std::uint64_t base_seed);

/// Propagate index-coupled disturbance sequence pairs through the LTV error
/// recursion, producing per-step sample sets for the tube check.
struct CoupledErrorPaths {
  ErrorSampleSets nominal;   // [step][sample]
  ErrorSampleSets realized;  // [step][sample]
};
CoupledErrorPaths coupled_rollouts(
    const LtvSystem& ltv, const GainSchedule& gains,
    const std::vector<std::vector<Vector>>& nominal_sequences,
    const std::vector<std::vector<Vector>>& perturbed_sequences);

/// Draw sample sequences i.i.d. from the empirical training set (uniform
/// over its atoms), then pair each with a copy perturbed inside the
/// ground-norm ball of radius eps and clipped to the support box when the
/// support is one. The coupling the tube proof requires.
struct CoupledDraw {
  std::vector<std::vector<Vector>> nominal;    // [sample][step]
  std::vector<std::vector<Vector>> perturbed;  // [sample][step]
};
CoupledDraw draw_coupled_sequences(const WassersteinBall& ball,
                                   const SupportPolytope& support, int samples,
                                   int steps, std::uint64_t seed);

}  // namespace drmpc
