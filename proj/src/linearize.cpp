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

#include "drmpc/linearize.hpp"

#include "drmpc/ocp.hpp"

namespace drmpc {

LtvSystem ltv_along(const DiscreteModel& model, const NominalTrajectory& traj) {
  const int n = static_cast<int>(traj.v.size());
  require(static_cast<int>(traj.z.size()) == n + 1,
          "ltv_along: trajectory must hold N+1 states and N inputs");
  LtvSystem ltv;
  ltv.A.reserve(n);
  ltv.B.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [a, b] = jacobians(model, traj.z[i], traj.v[i]);
    ltv.A.push_back(std::move(a));
    ltv.B.push_back(std::move(b));
  }
  return ltv;
}

TransitionTable::TransitionTable(const LtvSystem& ltv, const GainSchedule& gains)
    : n_(ltv.horizon()) {
  require(gains.horizon() == n_, "transition table: gain horizon mismatch");
  const int nx = ltv.n_x();
  a_cl_.reserve(n_);
  for (int i = 0; i < n_; ++i) a_cl_.push_back(gains.closed_loop(ltv, i));
  rows_.resize(n_);
  for (int i = 1; i <= n_; ++i) {
    auto& row = rows_[i - 1];
    row.resize(i);
    row[i - 1] = Matrix::Identity(nx, nx);
    for (int m = i - 2; m >= 0; --m) row[m] = row[m + 1] * a_cl_[m + 1];
  }
}

const Matrix& TransitionTable::phi(int i, int m) const {
  require(i >= 1 && i <= n_ && m >= 0 && m < i,
          "transition table: index out of range");
  return rows_[i - 1][m];
}

std::vector<Matrix> closed_loop_products(const LtvSystem& ltv,
                                         const GainSchedule& gains, int i) {
  require(i >= 1 && i <= ltv.horizon(),
          "closed_loop_products: step out of range");
  const int nx = ltv.n_x();
  std::vector<Matrix> products(i);
  products[i - 1] = Matrix::Identity(nx, nx);
  for (int m = i - 2; m >= 0; --m)
    products[m] = products[m + 1] * gains.closed_loop(ltv, m + 1);
  return products;
}

}  // namespace drmpc
