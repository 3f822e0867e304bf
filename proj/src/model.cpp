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

#include "drmpc/model.hpp"

#include <cmath>
#include <vector>

namespace drmpc {
namespace {

constexpr double kFdBaseStep = 1e-5;

double fd_step_size(double value) { return kFdBaseStep * (1.0 + std::abs(value)); }

}  // namespace

Vector DiscreteModel::step(const Vector& x, const Vector& u) const {
  require(x.size() == n_x_ && u.size() == n_u_, "step: dimension mismatch");
  Vector next = step_(x, u);
  if (next.size() != n_x_ || !next.allFinite())
    throw NumericalError("discrete step produced a non-finite state");
  return next;
}

Vector rk4_step(const ContinuousModel& base, double h, const Vector& x,
                const Vector& u) {
  const Vector s1 = base.rhs(x, u);
  const Vector s2 = base.rhs(x + 0.5 * h * s1, u);
  const Vector s3 = base.rhs(x + 0.5 * h * s2, u);
  const Vector s4 = base.rhs(x + h * s3, u);
  Vector next = x + (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
  if (!next.allFinite())
    throw NumericalError("rk4_step produced a non-finite state");
  return next;
}

Vector rk4_step(const DiscreteModel& model, const Vector& x, const Vector& u) {
  require(x.size() == model.n_x() && u.size() == model.n_u(),
          "rk4_step: dimension mismatch");
  require(model.base().has_value(),
          "rk4_step: model is not a continuous-time discretization");
  return rk4_step(*model.base(), model.h(), x, u);
}

std::pair<Matrix, Matrix> jacobians_fd(const DiscreteModel& model,
                                       const Vector& z, const Vector& v) {
  const int nx = model.n_x();
  const int nu = model.n_u();
  Matrix A(nx, nx);
  Matrix B(nx, nu);
  for (int j = 0; j < nx; ++j) {
    const double d = fd_step_size(z[j]);
    if (d <= 0.0 || !std::isfinite(d))
      throw NumericalError("jacobians: step size underflow");
    Vector zp = z, zm = z;
    zp[j] += d;
    zm[j] -= d;
    A.col(j) = (model.step(zp, v) - model.step(zm, v)) / (2.0 * d);
  }
  for (int j = 0; j < nu; ++j) {
    const double d = fd_step_size(v[j]);
    if (d <= 0.0 || !std::isfinite(d))
      throw NumericalError("jacobians: step size underflow");
    Vector vp = v, vm = v;
    vp[j] += d;
    vm[j] -= d;
    B.col(j) = (model.step(z, vp) - model.step(z, vm)) / (2.0 * d);
  }
  return {A, B};
}

std::pair<Matrix, Matrix> jacobians(const DiscreteModel& model,
                                    const Vector& z, const Vector& v) {
  require(z.allFinite() && v.allFinite(), "jacobians: non-finite input point");
  require(z.size() == model.n_x() && v.size() == model.n_u(),
          "jacobians: dimension mismatch");
  if (model.analytic_jacobians) return model.analytic_jacobians(z, v);
  return jacobians_fd(model, z, v);
}

Vector hessian_mu(const DiscreteModel& model, const Box& state_box,
                  const Box& input_box, int grid_points_per_dim,
                  double safety_factor) {
  require(state_box.dim() == model.n_x() && input_box.dim() == model.n_u(),
          "hessian_mu: box dimension mismatch");
  require(grid_points_per_dim >= 2, "hessian_mu: need at least 2 grid points");
  require((state_box.upper - state_box.lower).minCoeff() >= 0.0 &&
              (input_box.upper - input_box.lower).minCoeff() >= 0.0,
          "hessian_mu: empty box");

  const int nx = model.n_x();
  const int nu = model.n_u();
  const int dim = nx + nu;
  const int g = grid_points_per_dim;

  auto grid_value = [&](int axis, int idx) {
    const double lo = axis < nx ? state_box.lower[axis] : input_box.lower[axis - nx];
    const double hi = axis < nx ? state_box.upper[axis] : input_box.upper[axis - nx];
    return lo + (hi - lo) * static_cast<double>(idx) / (g - 1);
  };

  auto eval = [&](const Vector& p) {
    return model.step(p.head(nx), p.tail(nu));
  };

  Vector mu = Vector::Zero(nx);
  std::vector<int> idx(dim, 0);
  Vector point(dim);
  const long total = static_cast<long>(std::pow(g, dim));
  for (long cell = 0; cell < total; ++cell) {
    long rem = cell;
    for (int a = 0; a < dim; ++a) {
      idx[a] = static_cast<int>(rem % g);
      rem /= g;
      point[a] = grid_value(a, idx[a]);
    }
    // central-difference Hessian of every output at once
    const Vector f0 = eval(point);
    std::vector<Matrix> hn(nx, Matrix(dim, dim));
    for (int a = 0; a < dim; ++a) {
      const double da = fd_step_size(point[a]);
      Vector pp = point, pm = point;
      pp[a] += da;
      pm[a] -= da;
      const Vector faa = (eval(pp) - 2.0 * f0 + eval(pm)) / (da * da);
      for (int n = 0; n < nx; ++n) hn[n](a, a) = faa[n];
      for (int b = a + 1; b < dim; ++b) {
        const double db = fd_step_size(point[b]);
        Vector ppp = point, ppm = point, pmp = point, pmm = point;
        ppp[a] += da; ppp[b] += db;
        ppm[a] += da; ppm[b] -= db;
        pmp[a] -= da; pmp[b] += db;
        pmm[a] -= da; pmm[b] -= db;
        const Vector fab =
            (eval(ppp) - eval(ppm) - eval(pmp) + eval(pmm)) / (4.0 * da * db);
        for (int n = 0; n < nx; ++n) {
          hn[n](a, b) = fab[n];
          hn[n](b, a) = fab[n];
        }
      }
    }
    for (int n = 0; n < nx; ++n) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(hn[n], Eigen::EigenvaluesOnly);
      const double lam = es.eigenvalues().cwiseAbs().maxCoeff();
      mu[n] = std::max(mu[n], 0.5 * lam);
    }
  }
  return safety_factor * mu;
}

DiscreteModel discretize_rk4(ContinuousModel base, double h,
                             JacobianMethod method) {
  require(static_cast<bool>(base.rhs), "discretize_rk4: model has no rhs");
  ContinuousModel base_copy = base;
  DiscreteModel model(base.n_x, base.n_u, h,
                      [base_copy, h](const Vector& x, const Vector& u) {
                        return rk4_step(base_copy, h, x, u);
                      });
  model.base_ = std::move(base);
  model.jac_method_ = method;
  if (method == JacobianMethod::Analytic && model.base_->rhs_jac_x &&
      model.base_->rhs_jac_u) {
    const ContinuousModel& cm = *model.base_;
    const int nx = cm.n_x;
    model.analytic_jacobians = [cm, h, nx](const Vector& x, const Vector& u) {
      // chain rule through the four stages
      const Vector s1 = cm.rhs(x, u);
      const Vector x2 = x + 0.5 * h * s1;
      const Vector s2 = cm.rhs(x2, u);
      const Vector x3 = x + 0.5 * h * s2;
      const Vector s3 = cm.rhs(x3, u);
      const Vector x4 = x + h * s3;
      const Matrix I = Matrix::Identity(nx, nx);
      const Matrix J1x = cm.rhs_jac_x(x, u), J1u = cm.rhs_jac_u(x, u);
      const Matrix J2x = cm.rhs_jac_x(x2, u) * (I + 0.5 * h * J1x);
      const Matrix J2u = cm.rhs_jac_x(x2, u) * (0.5 * h * J1u) + cm.rhs_jac_u(x2, u);
      const Matrix J3x = cm.rhs_jac_x(x3, u) * (I + 0.5 * h * J2x);
      const Matrix J3u = cm.rhs_jac_x(x3, u) * (0.5 * h * J2u) + cm.rhs_jac_u(x3, u);
      const Matrix J4x = cm.rhs_jac_x(x4, u) * (I + h * J3x);
      const Matrix J4u = cm.rhs_jac_x(x4, u) * (h * J3u) + cm.rhs_jac_u(x4, u);
      Matrix A = I + (h / 6.0) * (J1x + 2.0 * J2x + 2.0 * J3x + J4x);
      Matrix B = (h / 6.0) * (J1u + 2.0 * J2u + 2.0 * J3u + J4u);
      return std::make_pair(A, B);
    };
  }
  return model;
}

DiscreteModel linear_discrete(const Matrix& A, const Matrix& B, double h) {
  require(A.rows() == A.cols() && A.rows() == B.rows(),
          "linear_discrete: inconsistent shapes");
  const Matrix Ac = A, Bc = B;
  DiscreteModel model(static_cast<int>(A.rows()), static_cast<int>(B.cols()), h,
                      [Ac, Bc](const Vector& x, const Vector& u) -> Vector {
                        return Ac * x + Bc * u;
                      });
  model.analytic_jacobians = [Ac, Bc](const Vector&, const Vector&) {
    return std::make_pair(Ac, Bc);
  };
  return model;
}

ContinuousModel mass_spring(double mass, double k1, double k2) {
  ContinuousModel cm;
  cm.n_x = 2;
  cm.n_u = 1;
  cm.rhs = [mass, k1, k2](const Vector& x, const Vector& u) {
    Vector dx(2);
    dx[0] = x[1];
    dx[1] = -(k2 / mass) * std::pow(x[0], 5) - (k1 / mass) * x[1] + u[0] / mass;
    return dx;
  };
  cm.rhs_jac_x = [mass, k1, k2](const Vector& x, const Vector&) {
    Matrix J(2, 2);
    J << 0.0, 1.0, -5.0 * (k2 / mass) * std::pow(x[0], 4), -(k1 / mass);
    return J;
  };
  cm.rhs_jac_u = [mass](const Vector&, const Vector&) {
    Matrix J(2, 1);
    J << 0.0, 1.0 / mass;
    return J;
  };
  return cm;
}

}  // namespace drmpc
