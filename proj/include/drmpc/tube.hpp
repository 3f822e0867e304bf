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

#include "drmpc/ambiguity.hpp"
#include "drmpc/linearize.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

/// Per-step transport-distance radii for the closed-loop error dynamics.
/// `rho` uses the norm of each transition product; `rho_factored` bounds each
/// product by the product of its factor norms, which is never smaller. Both
/// are valid upper bounds on the distance between the realizable and the
/// empirical error distributions.
struct TubeRadii {
  Vector rho;           // tighter form, indices 0..N
  Vector rho_factored;  // factored form, indices 0..N
  double eps = 0.0;
  int p = 1;
  GroundNorm norm = GroundNorm::One;

  int horizon() const { return static_cast<int>(rho.size()) - 1; }
};

/// rho_i = eps * sum_{m<i} |phi(i,m)|^p in the induced matrix norm, plus the
/// factored variant with per-factor norms.
TubeRadii tube_radii(const LtvSystem& ltv, const GainSchedule& gains,
                     double eps, int p = 1, GroundNorm norm = GroundNorm::One);

/// Geometric-series certificate for a stationary closed loop: finite radius
/// eps / (1 - |A_cl|^p) when |A_cl| < 1 in the induced norm, divergent
/// otherwise.
struct InvariantRadius {
  bool divergent = false;
  double radius = 0.0;
};
InvariantRadius invariant_radius(const Matrix& a_cl, double eps, int p = 1,
                                 GroundNorm norm = GroundNorm::One);

/// Per-step empirical error sample sets, indexed [step][sample].
using ErrorSampleSets = std::vector<std::vector<Vector>>;

struct TubeCheckRow {
  int step = 0;
  double distance = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - distance
  bool pass = false;
};

/// Empirical distance between realized and nominal error samples at every
/// step, compared against the radii. The realized rollouts must be coupled
/// index-wise to the nominal ones with per-sample ground distance <= eps.
std::vector<TubeCheckRow> validate_tube(const ErrorSampleSets& nominal_errors,
                                        const ErrorSampleSets& realized_errors,
                                        const TubeRadii& radii,
                                        double slack = 1e-9);

}  // namespace drmpc
