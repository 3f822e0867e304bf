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

#include "drmpc/model.hpp"
#include "drmpc/types.hpp"

namespace drmpc {

struct NominalTrajectory;  // ocp.hpp

/// Time-varying linearization (A_i, B_i), i = 0..N-1.
struct LtvSystem {
  std::vector<Matrix> A;
  std::vector<Matrix> B;

  int horizon() const { return static_cast<int>(A.size()); }
  int n_x() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
  int n_u() const { return B.empty() ? 0 : static_cast<int>(B[0].cols()); }
};

/// Time-varying feedback gains K_i, i = 0..N-1. The policy is u = K x + c,
/// so the closed-loop matrix at step i is A_i + B_i K_i.
struct GainSchedule {
  std::vector<Matrix> K;

  int horizon() const { return static_cast<int>(K.size()); }
  Matrix closed_loop(const LtvSystem& ltv, int i) const {
    return ltv.A[i] + ltv.B[i] * K[i];
  }
};

/// Linearize the step map along a nominal trajectory.
LtvSystem ltv_along(const DiscreteModel& model, const NominalTrajectory& traj);

/// Lower-triangular table of closed-loop transition products
///   phi(i, m) = A_cl(i-1) * A_cl(i-2) * ... * A_cl(m+1),  0 <= m < i <= N,
/// with the empty product phi(i, i-1) = I. The disturbance entering at step m
/// reaches step i through phi(i, m). Built by one backward sweep per i,
/// O(N^2) matrix products total; immutable afterwards.
class TransitionTable {
 public:
  TransitionTable(const LtvSystem& ltv, const GainSchedule& gains);

  int horizon() const { return n_; }
  const Matrix& closed_loop(int i) const { return a_cl_.at(i); }
  const Matrix& phi(int i, int m) const;

 private:
  int n_;
  std::vector<Matrix> a_cl_;
  std::vector<std::vector<Matrix>> rows_;  // rows_[i-1][m], m = 0..i-1
};

/// The products [phi(i, 0), ..., phi(i, i-1)] for one step i in [1, N].
std::vector<Matrix> closed_loop_products(const LtvSystem& ltv,
                                         const GainSchedule& gains, int i);

}  // namespace drmpc
