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

#include "drmpc/tube.hpp"

#include <cmath>

namespace drmpc {

TubeRadii tube_radii(const LtvSystem& ltv, const GainSchedule& gains,
                     double eps, int p, GroundNorm norm) {
  require(eps >= 0.0, "tube_radii: radius must be nonnegative");
  require(p >= 1, "tube_radii: order must be >= 1");
  const int n = ltv.horizon();
  const TransitionTable table(ltv, gains);

  TubeRadii out;
  out.eps = eps;
  out.p = p;
  out.norm = norm;
  out.rho = Vector::Zero(n + 1);
  out.rho_factored = Vector::Zero(n + 1);

  std::vector<double> factor_norm(n);
  for (int i = 0; i < n; ++i)
    factor_norm[i] = induced_matrix_norm(table.closed_loop(i), norm);

  for (int i = 1; i <= n; ++i) {
    double tight = 0.0;
    double factored = 0.0;
    for (int m = 0; m < i; ++m) {
      tight += std::pow(induced_matrix_norm(table.phi(i, m), norm), p);
      double prod = 1.0;  // phi(i, i-1) = I contributes 1
      for (int j = m + 1; j < i; ++j) prod *= factor_norm[j];
      factored += std::pow(prod, p);
    }
    out.rho[i] = eps * tight;
    out.rho_factored[i] = eps * factored;
  }
  return out;
}

InvariantRadius invariant_radius(const Matrix& a_cl, double eps, int p,
                                 GroundNorm norm) {
  InvariantRadius out;
  const double gamma = std::pow(induced_matrix_norm(a_cl, norm), p);
  if (gamma >= 1.0) {
    out.divergent = true;
    return out;
  }
  out.radius = eps / (1.0 - gamma);
  return out;
}

std::vector<TubeCheckRow> validate_tube(const ErrorSampleSets& nominal_errors,
                                        const ErrorSampleSets& realized_errors,
                                        const TubeRadii& radii, double slack) {
  require(nominal_errors.size() == realized_errors.size(),
          "validate_tube: step count mismatch");
  require(static_cast<int>(nominal_errors.size()) == radii.horizon() + 1,
          "validate_tube: radii horizon mismatch");
  require(radii.p == 1, "validate_tube: only the type-1 distance is checked");

  std::vector<TubeCheckRow> rows;
  rows.reserve(nominal_errors.size());
  for (size_t i = 0; i < nominal_errors.size(); ++i) {
    const auto& nom = nominal_errors[i];
    const auto& real = realized_errors[i];
    require(nom.size() == real.size() && !nom.empty(),
            "validate_tube: sample count mismatch at a step");
    const int m = static_cast<int>(nom.size());
    const int dim = static_cast<int>(nom[0].size());
    Matrix a(m, dim), b(m, dim);
    for (int s = 0; s < m; ++s) {
      a.row(s) = real[s].transpose();
      b.row(s) = nom[s].transpose();
    }
    TubeCheckRow row;
    row.step = static_cast<int>(i);
    row.distance = w1_distance(a, b, radii.norm);
    row.bound = radii.rho[static_cast<int>(i)];
    row.margin = row.bound - row.distance;
    row.pass = row.distance <= row.bound + slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace drmpc
