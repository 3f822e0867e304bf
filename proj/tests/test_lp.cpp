#include <doctest.h>

#include "drmpc/lp.hpp"
#include "drmpc/rng.hpp"

using namespace drmpc;

TEST_CASE("one-variable bound") {
  // min x s.t. x >= 1
  const Vector c = Vector::Constant(1, 1.0);
  const Matrix a = Matrix::Constant(1, 1, -1.0);
  const Vector b = Vector::Constant(1, -1.0);
  const LpSolution sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("simplex vertex") {
  // min -x-y s.t. x+y <= 1, x >= 0, y >= 0
  const Vector c = (Vector(2) << -1.0, -1.0).finished();
  Matrix a(3, 2);
  a << 1, 1, -1, 0, 0, -1;
  const Vector b = (Vector(3) << 1, 0, 0).finished();
  const LpSolution sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("infeasible and unbounded are distinguished") {
  {
    // x <= 0 and x >= 1
    Matrix a(2, 1);
    a << 1, -1;
    const Vector b = (Vector(2) << 0.0, -1.0).finished();
    CHECK(lp_solve(Vector::Constant(1, 1.0), a, b).status ==
          LpStatus::Infeasible);
  }
  {
    // min -x s.t. x >= 0: unbounded above
    const Matrix a = Matrix::Constant(1, 1, -1.0);
    const Vector b = Vector::Zero(1);
    CHECK(lp_solve(Vector::Constant(1, -1.0), a, b).status ==
          LpStatus::Unbounded);
  }
}

TEST_CASE("degenerate vertices do not upset the pivot rules") {
  // several redundant rows through the same optimum
  const Vector c = (Vector(2) << 1.0, 1.0).finished();
  Matrix a(5, 2);
  a << -1, 0, 0, -1, -1, -1, -2, -1, -1, -2;
  Vector b(5);
  b << 0, 0, 0, 0, 0;
  const LpSolution sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(0.0));
}

TEST_CASE("random instances with a planted dual certificate") {
  // Construct A, b, c so that a chosen x* with multipliers mu on the active
  // rows satisfies the optimality conditions; the optimal value is then
  // known without solving.
  Xoshiro256pp rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4);   // 2..5
    const int m = n + 2 + static_cast<int>(rng.uniform() * 6);
    const int n_active = n;  // enough active rows to pin the vertex

    Matrix a(m, n);
    for (int r = 0; r < m; ++r)
      for (int cc = 0; cc < n; ++cc) a(r, cc) = rng.uniform(-1.0, 1.0);
    Vector x_star(n);
    for (int j = 0; j < n; ++j) x_star[j] = rng.uniform(-2.0, 2.0);

    Vector b(m);
    Vector mu = Vector::Zero(m);
    for (int r = 0; r < m; ++r) {
      if (r < n_active) {
        b[r] = a.row(r).dot(x_star);  // active
        mu[r] = rng.uniform(0.1, 2.0);
      } else {
        b[r] = a.row(r).dot(x_star) + rng.uniform(0.1, 3.0);  // slack
      }
    }
    const Vector c = -a.transpose() * mu;  // stationarity: c + A' mu = 0

    const LpSolution sol = lp_solve(c, a, b);
    REQUIRE(sol.status == LpStatus::Optimal);
    // weak duality pins the value: c'x* = -mu'b
    CHECK(std::abs(sol.value - c.dot(x_star)) < 1e-7);
    CHECK(std::abs(sol.value + mu.dot(b)) < 1e-7);
    // and the returned point is feasible
    CHECK(((a * sol.x - b).array() <= 1e-8).all());
  }
}

TEST_CASE("iteration cap is reported, not silently truncated") {
  // a healthy LP finishes well under the cap; verify the count is recorded
  const Vector c = (Vector(2) << -1.0, -2.0).finished();
  Matrix a(4, 2);
  a << 1, 0, 0, 1, -1, 0, 0, -1;
  const Vector b = (Vector(4) << 3, 4, 0, 0).finished();
  const LpSolution sol = lp_solve(c, a, b);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.iterations > 0);
  CHECK(sol.iterations <= 10 * (4 + 2 * 2 + 4 + 4));
}
