#include <doctest.h>

#include <cmath>

#include "drmpc/model.hpp"
#include "drmpc/rng.hpp"
#include "oracles.hpp"

using namespace drmpc;

namespace {

DiscreteModel case_study_model() {
  return discretize_rk4(mass_spring(), 0.1);
}

}  // namespace

TEST_CASE("rk4 step matches the hand-evaluated stages on the bench model") {
  const auto model = case_study_model();
  const Vector x = (Vector(2) << -2.0, 0.0).finished();
  const Vector u = Vector::Zero(1);

  // Stage evaluation written out against the plant equations directly.
  const double m = 2.0, k1 = 3.0, k2 = 2.0, h = 0.1;
  auto f = [&](double x1, double x2, double uu) {
    return std::pair<double, double>{
        x2, -(k2 / m) * std::pow(x1, 5) - (k1 / m) * x2 + uu / m};
  };
  auto [a1, b1] = f(x[0], x[1], 0.0);
  auto [a2, b2] = f(x[0] + 0.5 * h * a1, x[1] + 0.5 * h * b1, 0.0);
  auto [a3, b3] = f(x[0] + 0.5 * h * a2, x[1] + 0.5 * h * b2, 0.0);
  auto [a4, b4] = f(x[0] + h * a3, x[1] + h * b3, 0.0);
  const double next1 = x[0] + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
  const double next2 = x[1] + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);

  const Vector next = rk4_step(model, x, u);
  CHECK(next[0] == doctest::Approx(next1).epsilon(1e-14));
  CHECK(next[1] == doctest::Approx(next2).epsilon(1e-14));
}

TEST_CASE("rk4 on the zero vector field is the identity for any h") {
  ContinuousModel zero;
  zero.n_x = 3;
  zero.n_u = 1;
  zero.rhs = [](const Vector& x, const Vector&) { return Vector::Zero(x.size()); };
  for (double h : {1e-3, 0.1, 2.0}) {
    const auto model = discretize_rk4(zero, h);
    Xoshiro256pp rng(7);
    for (int t = 0; t < 5; ++t) {
      Vector x(3), u(1);
      for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-5.0, 5.0);
      u[0] = rng.uniform(-5.0, 5.0);
      CHECK((rk4_step(model, x, u) - x).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("rk4 on a linear field equals the 4th-order exponential series") {
  // stable random 2x2 system
  Matrix a(2, 2);
  a << -0.8, 0.7, -0.4, -1.1;
  ContinuousModel lin;
  lin.n_x = 2;
  lin.n_u = 1;
  lin.rhs = [a](const Vector& x, const Vector&) -> Vector { return a * x; };
  const double h = 0.07;
  const auto model = discretize_rk4(lin, h);
  const Matrix series = oracles::expm_truncated(a, h, 4);
  Xoshiro256pp rng(21);
  for (int t = 0; t < 10; ++t) {
    Vector x(2);
    x << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    const Vector stepped = rk4_step(model, x, Vector::Zero(1));
    CHECK((stepped - series * x).cwiseAbs().maxCoeff() < 1e-13);
    // and within O(h^5) of the true exponential
    const Matrix truth = oracles::expm_truncated(a, h, 30);
    CHECK((stepped - truth * x).cwiseAbs().maxCoeff() < std::pow(h, 5));
  }
}

TEST_CASE("non-finite dynamics surface as NumericalError") {
  ContinuousModel bad;
  bad.n_x = 1;
  bad.n_u = 1;
  bad.rhs = [](const Vector& x, const Vector&) -> Vector {
    return Vector::Constant(1, x[0] > 0.5 ? std::nan("") : 0.0);
  };
  const auto model = discretize_rk4(bad, 0.1);
  CHECK_THROWS_AS(model.step(Vector::Constant(1, 1.0), Vector::Zero(1)),
                  NumericalError);
}

TEST_CASE("jacobians of a linear discrete model are exact") {
  Matrix a(2, 2), b(2, 1);
  a << 0.9, 0.1, -0.2, 0.8;
  b << 0.0, 0.5;
  const auto model = linear_discrete(a, b);
  const auto [ja, jb] = jacobians(model, (Vector(2) << 1.0, -2.0).finished(),
                                  Vector::Constant(1, 3.0));
  CHECK(ja.isApprox(a, 1e-14));
  CHECK(jb.isApprox(b, 1e-14));
}

TEST_CASE("analytic discrete jacobian equals the linearized-plant RK4 map at the origin") {
  const auto model = case_study_model();
  const auto [a_d, b_d] =
      jacobians(model, Vector::Zero(2), Vector::Zero(1));

  // Independent route: RK4-discretize the continuous linearization at 0.
  Matrix a_c(2, 2), b_c(2, 1);
  a_c << 0.0, 1.0, 0.0, -1.5;
  b_c << 0.0, 0.5;
  const Matrix a_ref = oracles::expm_truncated(a_c, 0.1, 4);
  // For constant input, the input map integrates the same truncated series.
  Matrix b_ref = Matrix::Zero(2, 1);
  Matrix term = 0.1 * Matrix::Identity(2, 2);
  for (int j = 1; j <= 4; ++j) {
    b_ref += term * b_c;
    term = term * (0.1 * a_c) / (j + 1);
  }
  CHECK(a_d.isApprox(a_ref, 1e-12));
  CHECK(b_d.isApprox(b_ref, 1e-12));
}

TEST_CASE("finite-difference and analytic jacobians agree on random points") {
  const auto model = case_study_model();
  Xoshiro256pp rng(99);
  for (int t = 0; t < 100; ++t) {
    Vector z(2), v(1);
    z << rng.uniform(-2.5, 0.5), rng.uniform(-1.0, 1.0);
    v << rng.uniform(-10.0, 10.0);
    const auto [aa, ab] = jacobians(model, z, v);
    const auto [fa, fb] = jacobians_fd(model, z, v);
    CHECK((aa - fa).cwiseAbs().maxCoeff() / aa.cwiseAbs().maxCoeff() < 1e-6);
    CHECK((ab - fb).cwiseAbs().maxCoeff() / ab.cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("hessian_mu vanishes for linear models up to difference noise") {
  Matrix a(2, 2), b(2, 1);
  a << 0.9, 0.1, -0.2, 0.8;
  b << 0.1, 0.5;
  const auto model = linear_discrete(a, b);
  const Box x_box((Vector(2) << -1, -1).finished(),
                  (Vector(2) << 1, 1).finished());
  const Box u_box(Vector::Constant(1, -2.0), Vector::Constant(1, 2.0));
  const Vector mu = hessian_mu(model, x_box, u_box, 3);
  CHECK(mu.maxCoeff() < 1e-5);  // exact zero is unreachable by differences
}

TEST_CASE("hessian_mu of x^2 is one half of the constant curvature") {
  DiscreteModel quad(1, 1, 1.0, [](const Vector& x, const Vector&) {
    return Vector::Constant(1, x[0] * x[0]);
  });
  const Box x_box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  const Box u_box(Vector::Constant(1, 0.0), Vector::Constant(1, 0.0));
  const Vector mu = hessian_mu(quad, x_box, u_box, 5, /*safety_factor=*/1.0);
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("hessian_mu on the bench model is stable under grid refinement") {
  const auto model = case_study_model();
  const Box x_box((Vector(2) << -2.5, -1.0).finished(),
                  (Vector(2) << 0.5, 1.0).finished());
  const Box u_box(Vector::Constant(1, -10.0), Vector::Constant(1, 10.0));
  const Vector coarse = hessian_mu(model, x_box, u_box, 5);
  const Vector fine = hessian_mu(model, x_box, u_box, 9);
  for (int n = 0; n < 2; ++n) {
    const double scale = std::max(fine[n], 1e-12);
    CHECK(std::abs(fine[n] - coarse[n]) / scale < 0.02);
  }
  // the quintic spring dominates the curvature of the second output
  CHECK(fine[1] > fine[0]);
}

TEST_CASE("hessian_mu grows monotonically with the box") {
  const auto model = case_study_model();
  const Box u_box(Vector::Constant(1, -10.0), Vector::Constant(1, 10.0));
  // aligned grids: the outer box contains the inner one's extreme points
  const Box inner((Vector(2) << -1.0, -0.5).finished(),
                  (Vector(2) << 1.0, 0.5).finished());
  const Box outer((Vector(2) << -2.0, -1.0).finished(),
                  (Vector(2) << 2.0, 1.0).finished());
  const Vector mu_inner = hessian_mu(model, inner, u_box, 5);
  const Vector mu_outer = hessian_mu(model, outer, u_box, 5);
  CHECK((mu_outer.array() >= mu_inner.array() - 1e-9).all());
}

TEST_CASE("hessian_mu rejects bad grids") {
  const auto model = case_study_model();
  const Box x_box(Vector::Zero(2), Vector::Zero(2));
  const Box u_box(Vector::Zero(1), Vector::Zero(1));
  CHECK_THROWS_AS(hessian_mu(model, x_box, u_box, 1), InvalidInput);
}
