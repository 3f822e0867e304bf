#include <doctest.h>

#include "drmpc/drilqr.hpp"
#include "drmpc/linearize.hpp"
#include "drmpc/rng.hpp"

using namespace drmpc;

namespace {

Matrix random_matrix(Xoshiro256pp& rng, int rows, int cols, double scale) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-scale, scale);
  return m;
}

LtvSystem random_ltv(Xoshiro256pp& rng, int n, int nx, int nu) {
  LtvSystem ltv;
  for (int i = 0; i < n; ++i) {
    ltv.A.push_back(random_matrix(rng, nx, nx, 1.0));
    ltv.B.push_back(random_matrix(rng, nx, nu, 1.0));
  }
  return ltv;
}

}  // namespace

TEST_CASE("linear model gives a constant LTV system along any trajectory") {
  Matrix a(2, 2), b(2, 1);
  a << 1.0, 0.1, 0.0, 0.9;
  b << 0.0, 0.1;
  const auto model = linear_discrete(a, b);
  GainSchedule gains;
  gains.K.assign(6, Matrix::Zero(1, 2));
  std::vector<Vector> c(6, Vector::Constant(1, 0.3));
  const auto traj =
      rollout_feedforward(model, gains, c, (Vector(2) << 1.0, -1.0).finished());

  const LtvSystem ltv = ltv_along(model, traj);
  REQUIRE(ltv.horizon() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(ltv.A[i].isApprox(a, 1e-14));
    CHECK(ltv.B[i].isApprox(b, 1e-14));
  }
}

TEST_CASE("equilibrium trajectory linearizes to the origin jacobian everywhere") {
  const auto model = discretize_rk4(mass_spring(), 0.1);
  NominalTrajectory traj;
  traj.z.assign(8, Vector::Zero(2));
  traj.v.assign(7, Vector::Zero(1));
  traj.c.assign(7, Vector::Zero(1));
  const LtvSystem ltv = ltv_along(model, traj);
  const auto [a0, b0] = jacobians(model, Vector::Zero(2), Vector::Zero(1));
  for (int i = 0; i < 7; ++i) {
    CHECK(ltv.A[i].isApprox(a0, 1e-14));
    CHECK(ltv.B[i].isApprox(b0, 1e-14));
  }
}

TEST_CASE("LTV along a curved trajectory matches pointwise jacobians") {
  const auto model = discretize_rk4(mass_spring(), 0.1);
  CostWeights w{(Matrix(2, 2) << 100, 0, 0, 1).finished(),
                Matrix::Constant(1, 1, 1.0),
                (Matrix(2, 2) << 100, 0, 0, 1).finished()};
  const auto traj = default_initial_trajectory(
      model, w, (Vector(2) << -2.0, 0.0).finished(), 40);
  const LtvSystem ltv = ltv_along(model, traj);
  for (int i : {3, 17, 33}) {
    const auto [ai, bi] = jacobians(model, traj.z[i], traj.v[i]);
    CHECK(ltv.A[i].isApprox(ai, 1e-14));
    CHECK(ltv.B[i].isApprox(bi, 1e-14));
    // the quintic term makes the position column move along the arc
    CHECK(ltv.A[i](1, 0) != doctest::Approx(ltv.A[0](1, 0)).epsilon(1e-3));
  }
}

TEST_CASE("three-step product expansion") {
  // products for i=3 must be [A2*A1, A2, I]
  Xoshiro256pp rng(5);
  LtvSystem ltv = random_ltv(rng, 3, 2, 1);
  GainSchedule gains;
  for (int i = 0; i < 3; ++i) gains.K.push_back(random_matrix(rng, 1, 2, 1.0));

  std::vector<Matrix> a_cl;
  for (int i = 0; i < 3; ++i) a_cl.push_back(ltv.A[i] + ltv.B[i] * gains.K[i]);

  const auto products = closed_loop_products(ltv, gains, 3);
  REQUIRE(products.size() == 3);
  CHECK(products[0].isApprox(a_cl[2] * a_cl[1], 1e-14));
  CHECK(products[1].isApprox(a_cl[2], 1e-14));
  CHECK(products[2].isApprox(Matrix::Identity(2, 2), 1e-14));
}

TEST_CASE("identity chain collapses every product to the identity") {
  LtvSystem ltv;
  GainSchedule gains;
  for (int i = 0; i < 5; ++i) {
    ltv.A.push_back(Matrix::Identity(3, 3));
    ltv.B.push_back(Matrix::Zero(3, 1));
    gains.K.push_back(Matrix::Zero(1, 3));
  }
  for (int i = 1; i <= 5; ++i)
    for (const auto& phi : closed_loop_products(ltv, gains, i))
      CHECK(phi.isApprox(Matrix::Identity(3, 3), 1e-15));
}

TEST_CASE("products match a direct left-multiplication loop") {
  Xoshiro256pp rng(11);
  LtvSystem ltv = random_ltv(rng, 4, 2, 2);
  GainSchedule gains;
  for (int i = 0; i < 4; ++i) gains.K.push_back(random_matrix(rng, 2, 2, 0.6));

  const auto products = closed_loop_products(ltv, gains, 4);
  for (int m = 0; m < 4; ++m) {
    Matrix direct = Matrix::Identity(2, 2);
    for (int j = m + 1; j <= 3; ++j)
      direct = (ltv.A[j] + ltv.B[j] * gains.K[j]) * direct;
    CHECK(products[m].isApprox(direct, 1e-13));
  }
}

TEST_CASE("transition table is recursively consistent") {
  Xoshiro256pp rng(13);
  LtvSystem ltv = random_ltv(rng, 7, 3, 1);
  GainSchedule gains;
  for (int i = 0; i < 7; ++i) gains.K.push_back(random_matrix(rng, 1, 3, 0.5));
  const TransitionTable table(ltv, gains);

  for (int i = 1; i < 7; ++i) {
    CHECK(table.phi(i + 1, i).isApprox(Matrix::Identity(3, 3), 1e-15));
    for (int m = 0; m < i; ++m)
      CHECK(table.phi(i + 1, m)
                .isApprox(table.closed_loop(i) * table.phi(i, m), 1e-12));
  }
  CHECK_THROWS_AS(table.phi(0, 0), InvalidInput);
  CHECK_THROWS_AS(table.phi(3, 3), InvalidInput);
  CHECK_THROWS_AS(closed_loop_products(ltv, gains, 8), InvalidInput);
}

TEST_CASE("superposition: forward error recursion equals the product sum") {
  Xoshiro256pp rng(17);
  LtvSystem ltv = random_ltv(rng, 9, 2, 1);
  GainSchedule gains;
  for (int i = 0; i < 9; ++i) gains.K.push_back(random_matrix(rng, 1, 2, 0.4));
  const TransitionTable table(ltv, gains);

  std::vector<Vector> w(9);
  for (auto& wi : w) wi = random_matrix(rng, 2, 1, 0.3);

  Vector e = Vector::Zero(2);
  for (int i = 0; i < 9; ++i) {
    e = table.closed_loop(i) * e + w[i];
    Vector superposed = Vector::Zero(2);
    for (int m = 0; m <= i; ++m) superposed += table.phi(i + 1, m) * w[m];
    CHECK((e - superposed).cwiseAbs().maxCoeff() < 1e-10);
  }
}
