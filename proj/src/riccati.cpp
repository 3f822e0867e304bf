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

#include "drmpc/riccati.hpp"

namespace drmpc {
namespace {

constexpr double kCholeskyTol = 1e-12;

// Solve (R + B'PB) X = RHS by Cholesky, falling back to a pivoted
// factorization when the matrix is indefinite within tolerance.
Matrix solve_gain_system(const Matrix& lhs, const Matrix& rhs) {
  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::FullPivLU<Matrix> lu(lhs);
  if (!lu.isInvertible() ||
      lu.rcond() < kCholeskyTol)
    throw NumericalError("riccati: input-weight system singular");
  return lu.solve(rhs);
}

}  // namespace

void CostWeights::validate(int n_x, int n_u) const {
  require(Q.rows() == n_x && Q.cols() == n_x, "weights: Q shape mismatch");
  require(Qf.rows() == n_x && Qf.cols() == n_x, "weights: Qf shape mismatch");
  require(R.rows() == n_u && R.cols() == n_u, "weights: R shape mismatch");
  require(Q.isApprox(Q.transpose(), 1e-9), "weights: Q not symmetric");
  require(Qf.isApprox(Qf.transpose(), 1e-9), "weights: Qf not symmetric");
  require(R.isApprox(R.transpose(), 1e-9), "weights: R not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eq(Q, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> eqf(Qf, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> er(R, Eigen::EigenvaluesOnly);
  require(eq.eigenvalues().minCoeff() >= -1e-9, "weights: Q not PSD");
  require(eqf.eigenvalues().minCoeff() >= -1e-9, "weights: Qf not PSD");
  require(er.eigenvalues().minCoeff() > 0.0, "weights: R not PD");
}

GainSchedule riccati_gains(const LtvSystem& ltv, const CostWeights& weights) {
  const int n = ltv.horizon();
  require(n >= 1, "riccati: empty horizon");
  weights.validate(ltv.n_x(), ltv.n_u());

  GainSchedule gains;
  gains.K.resize(n);
  Matrix P = weights.Qf;
  for (int i = n - 1; i >= 0; --i) {
    const Matrix& A = ltv.A[i];
    const Matrix& B = ltv.B[i];
    const Matrix lhs = weights.R + B.transpose() * P * B;
    gains.K[i] = -solve_gain_system(lhs, B.transpose() * P * A);
    const Matrix a_cl = A + B * gains.K[i];
    P = weights.Q + gains.K[i].transpose() * weights.R * gains.K[i] +
        a_cl.transpose() * P * a_cl;
    P = 0.5 * (P + P.transpose());
    if (!P.allFinite()) throw NumericalError("riccati: non-finite cost-to-go");
  }
  return gains;
}

StationaryLqr stationary_lqr(const Matrix& A, const Matrix& B,
                             const CostWeights& weights, double tol,
                             int max_iters) {
  LtvSystem one_step;
  one_step.A = {A};
  one_step.B = {B};
  weights.validate(static_cast<int>(A.rows()), static_cast<int>(B.cols()));

  StationaryLqr out;
  Matrix P = weights.Qf;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix lhs = weights.R + B.transpose() * P * B;
    out.K = -solve_gain_system(lhs, B.transpose() * P * A);
    const Matrix a_cl = A + B * out.K;
    Matrix next = weights.Q + out.K.transpose() * weights.R * out.K +
                  a_cl.transpose() * P * a_cl;
    next = 0.5 * (next + next.transpose());
    out.iterations = it + 1;
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (change < tol) break;
  }
  out.P = P;
  return out;
}

}  // namespace drmpc
