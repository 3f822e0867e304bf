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

#include "drmpc/linerr.hpp"

namespace drmpc {
namespace {

double stacked_inf_norm(const Vector& x, const Vector& kx) {
  return std::max(x.cwiseAbs().maxCoeff(), kx.size() > 0
                                               ? kx.cwiseAbs().maxCoeff()
                                               : 0.0);
}

}  // namespace

Vector remainder_bound(const Vector& mu, const Vector& dx, const Vector& du) {
  require((mu.array() >= 0.0).all(), "remainder_bound: mu must be nonnegative");
  const double eta = std::max(dx.cwiseAbs().maxCoeff(),
                              du.size() > 0 ? du.cwiseAbs().maxCoeff() : 0.0);
  return eta * eta * mu;
}

SplitErrorPaths split_error_rollout(const LtvSystem& ltv,
                                    const GainSchedule& gains,
                                    const std::vector<Vector>& disturbances,
                                    const std::vector<Vector>& remainders) {
  const int n = ltv.horizon();
  require(static_cast<int>(disturbances.size()) == n &&
              static_cast<int>(remainders.size()) == n,
          "split_error_rollout: sequence length mismatch");
  SplitErrorPaths paths;
  paths.disturbance.resize(n + 1, Vector::Zero(ltv.n_x()));
  paths.linearization.resize(n + 1, Vector::Zero(ltv.n_x()));
  for (int i = 0; i < n; ++i) {
    const Matrix a_cl = gains.closed_loop(ltv, i);
    paths.disturbance[i + 1] = a_cl * paths.disturbance[i] + disturbances[i];
    paths.linearization[i + 1] = a_cl * paths.linearization[i] + remainders[i];
  }
  return paths;
}

Matrix error_split_bound(const Vector& mu, const GainSchedule& gains,
                         const std::vector<Vector>& e_path,
                         const std::vector<Vector>& eps_path) {
  require(e_path.size() == eps_path.size() && !e_path.empty(),
          "error_split_bound: path length mismatch");
  require((mu.array() >= 0.0).all(), "error_split_bound: mu must be nonnegative");
  const int steps = static_cast<int>(e_path.size());
  Matrix bounds(steps, mu.size());
  for (int i = 0; i < steps; ++i) {
    const int gi = std::min<int>(i, gains.horizon() - 1);
    const Matrix& k = gains.K[gi];
    const double e_norm = stacked_inf_norm(e_path[i], k * e_path[i]);
    const double eps_norm = stacked_inf_norm(eps_path[i], k * eps_path[i]);
    const double scale = (e_norm + eps_norm) * (e_norm + eps_norm);
    bounds.row(i) = (scale * mu).transpose();
  }
  return bounds;
}

}  // namespace drmpc
