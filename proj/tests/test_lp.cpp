#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

#include "gridext/grid_poly.hpp"
#include "gridext/lp.hpp"
#include "gridext/minmax.hpp"
#include "support.hpp"

using namespace gridext;

namespace {

// Minimum of c'x over {A x <= b} in two variables, by enumerating every
// vertex (intersection of two constraint lines) and keeping feasible ones.
double vertex_enumeration(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::Vector2d& c) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d M;
      M << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = M.partialPivLu().solve(Eigen::Vector2d(b(i), b(j)));
      if (((A * x - b).array() <= 1e-9).all()) best = std::min(best, c.dot(x));
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("one variable: min t subject to -t <= 0.3 <= t") {
  LpProblem p;
  p.A = Eigen::MatrixXd::Constant(2, 1, -1.0);
  p.b = Eigen::Vector2d(-0.3, 0.3);
  p.c = Eigen::VectorXd::Constant(1, 1.0);
  const LpResult r = lp_core(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(0.3));
  CHECK(r.objective == doctest::Approx(0.3));
  CHECK(r.gap <= 1e-12);
}

TEST_CASE("the n = 3, d = 2 monic problem in monomial form gives the solver's answer") {
  // Variables (c0, c1, t); P(x) = x^2 + c1 x + c0; constraints +-P(x_k) <= t.
  const auto xs = oracle::grid(3);
  LpProblem p;
  p.A.resize(6, 3);
  p.b.resize(6);
  for (int k = 0; k < 3; ++k) {
    const double x = xs[k];
    p.A.row(2 * k) << 1.0, x, -1.0;
    p.b(2 * k) = -x * x;
    p.A.row(2 * k + 1) << -1.0, -x, -1.0;
    p.b(2 * k + 1) = x * x;
  }
  p.c = Eigen::Vector3d(0.0, 0.0, 1.0);
  const LpResult r = lp_core(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(0.5));
  CHECK(r.x(0) == doctest::Approx(-0.5));
  CHECK(std::abs(r.x(1)) < 1e-12);
  CHECK(solve_monic_min(make_grid(3), 2).objective == doctest::Approx(r.objective).epsilon(1e-12));
}

TEST_CASE("no constraints and zero cost: the optimum is 0") {
  LpProblem p;
  p.A.resize(0, 2);
  p.b.resize(0);
  p.c = Eigen::Vector2d::Zero();
  const LpResult r = lp_core(p);
  CHECK(r.status == LpStatus::Optimal);
  CHECK(r.objective == 0.0);
}

TEST_CASE("infeasible and unbounded problems are reported distinctly") {
  LpProblem infeasible;
  infeasible.A = Eigen::Vector2d(1.0, -1.0);
  infeasible.b = Eigen::Vector2d(-1.0, -1.0);  // x <= -1 and x >= 1
  infeasible.c = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(lp_core(infeasible).status == LpStatus::Infeasible);

  LpProblem unbounded;
  unbounded.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  unbounded.b = Eigen::VectorXd::Constant(1, 1.0);  // x <= 1, minimize x
  unbounded.c = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(lp_core(unbounded).status == LpStatus::Unbounded);

  CHECK(to_string(LpStatus::Infeasible) != to_string(LpStatus::Unbounded));
}

TEST_CASE("equality rows are honoured") {
  LpProblem p;
  p.A.resize(5, 2);
  p.A << 1, 1, 1, 0, 0, 1, -1, 0, 0, -1;
  p.b.resize(5);
  p.b << 1, 3, 3, 0, 0;
  p.c = Eigen::Vector2d(1.0, 2.0);
  p.equality_rows = {0};
  const LpResult r = lp_core(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x(0) + r.x(1) == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("property: random bounded two-variable LPs match vertex enumeration") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 4 + trial % 10;
    Eigen::MatrixXd A(m + 4, 2);
    Eigen::VectorXd b(m + 4);
    for (int i = 0; i < m; ++i) {
      A(i, 0) = u(rng);
      A(i, 1) = u(rng);
      b(i) = 0.5 + std::abs(u(rng));  // the origin stays feasible
    }
    A.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    b.tail(4).setConstant(5.0);
    const Eigen::Vector2d c(u(rng), u(rng));
    LpProblem p{A, b, c, {}};
    const LpResult r = lp_core(p);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(vertex_enumeration(A, b, c)).epsilon(1e-10).scale(1.0));
    CHECK(r.gap <= 1e-9 * (1.0 + std::abs(r.objective)));
    CHECK(((A * r.x - b).array() <= 1e-10).all());
    // Dual feasibility for A x <= b: y >= 0 and A'y = -c.
    CHECK((r.dual.array() >= -1e-12).all());
    CHECK((A.transpose() * r.dual + c).norm() <= 1e-10);
  }
}

TEST_CASE("pivoting is deterministic") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd A(30, 4);
  Eigen::VectorXd b(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 4; ++j) A(i, j) = u(rng);
    b(i) = 1.0;
  }
  const Eigen::Vector4d c(u(rng), u(rng), u(rng), u(rng));
  const LpResult r1 = lp_core({A, b, c, {}});
  const LpResult r2 = lp_core({A, b, c, {}});
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.basis_rows == r2.basis_rows);
  CHECK(r1.objective == r2.objective);
}

}  // TEST_SUITE
