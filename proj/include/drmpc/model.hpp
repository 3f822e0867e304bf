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

#include <functional>
#include <optional>
#include <utility>

#include "drmpc/types.hpp"

namespace drmpc {

/// Continuous-time dynamics x' = rhs(x, u), with optional analytic Jacobians
/// of the right-hand side.
struct ContinuousModel {
  int n_x = 0;
  int n_u = 0;
  std::function<Vector(const Vector&, const Vector&)> rhs;
  // d rhs / dx and d rhs / du; empty means finite differences downstream.
  std::function<Matrix(const Vector&, const Vector&)> rhs_jac_x;
  std::function<Matrix(const Vector&, const Vector&)> rhs_jac_u;
};

/// How jacobians() differentiates the discrete step map.
enum class JacobianMethod {
  Analytic,          // chain rule through the RK4 stages; needs rhs jacobians
  FiniteDifference,  // central differences on the step map
};

/// Discrete-time step map x+ = step(x, u). Either an RK4 discretization of a
/// ContinuousModel or a directly supplied map (e.g. a linear system).
class DiscreteModel {
 public:
  DiscreteModel(int n_x, int n_u, double h,
                std::function<Vector(const Vector&, const Vector&)> step)
      : n_x_(n_x), n_u_(n_u), h_(h), step_(std::move(step)) {
    require(n_x_ > 0 && n_u_ > 0, "model dimensions must be positive");
    require(h_ > 0.0, "sampling period must be positive");
  }

  int n_x() const { return n_x_; }
  int n_u() const { return n_u_; }
  double h() const { return h_; }

  /// Evaluates the step map. Throws NumericalError on non-finite output.
  Vector step(const Vector& x, const Vector& u) const;

  const std::optional<ContinuousModel>& base() const { return base_; }
  JacobianMethod jacobian_method() const { return jac_method_; }

  /// Analytic discrete Jacobians when the map supplies them directly
  /// (linear models do).
  std::function<std::pair<Matrix, Matrix>(const Vector&, const Vector&)>
      analytic_jacobians;

  friend DiscreteModel discretize_rk4(ContinuousModel base, double h,
                                      JacobianMethod method);

 private:
  int n_x_;
  int n_u_;
  double h_;
  std::function<Vector(const Vector&, const Vector&)> step_;
  std::optional<ContinuousModel> base_;
  JacobianMethod jac_method_ = JacobianMethod::FiniteDifference;
};

/// Axis-aligned box, used for curvature scans and samplers.
struct Box {
  Vector lower;
  Vector upper;

  Box() = default;
  Box(Vector lo, Vector up) : lower(std::move(lo)), upper(std::move(up)) {
    require(lower.size() == upper.size(), "box bounds size mismatch");
    require((lower.array() <= upper.array()).all(),
            "box lower bound exceeds upper bound");
  }
  int dim() const { return static_cast<int>(lower.size()); }
};

/// One classical 4-stage Runge-Kutta step of the model's continuous base.
/// The model must be an RK4 discretization.
Vector rk4_step(const DiscreteModel& model, const Vector& x, const Vector& u);

/// Free-function form used by discretize_rk4 and tests.
Vector rk4_step(const ContinuousModel& base, double h, const Vector& x,
                const Vector& u);

/// Jacobians (A, B) of the discrete step map at (z, v). Uses the analytic
/// route when the model provides one, otherwise central differences with
/// step 1e-5 * (1 + |value|) per coordinate.
std::pair<Matrix, Matrix> jacobians(const DiscreteModel& model,
                                    const Vector& z, const Vector& v);

/// Finite-difference Jacobians regardless of what the model provides.
std::pair<Matrix, Matrix> jacobians_fd(const DiscreteModel& model,
                                       const Vector& z, const Vector& v);

/// Per-output curvature bounds: for each output n, half the largest
/// eigenvalue magnitude of the (x,u) Hessian of the step map, maximized over
/// a grid on X x U and inflated by safety_factor.
Vector hessian_mu(const DiscreteModel& model, const Box& state_box,
                  const Box& input_box, int grid_points_per_dim,
                  double safety_factor = 1.1);

/// RK4 discretization of a continuous model.
DiscreteModel discretize_rk4(ContinuousModel base, double h,
                             JacobianMethod method = JacobianMethod::Analytic);

/// Exact linear map x+ = A x + B u.
DiscreteModel linear_discrete(const Matrix& A, const Matrix& B,
                              double h = 1.0);

/// The nonlinear mass-spring bench model:
///   x1' = x2
///   x2' = -(k2/m) x1^5 - (k1/m) x2 + u/m
/// with analytic continuous-time Jacobians.
ContinuousModel mass_spring(double mass = 2.0, double k1 = 3.0,
                            double k2 = 2.0);

}  // namespace drmpc
