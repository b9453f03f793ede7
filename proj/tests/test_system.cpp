#include <doctest.h>

#include <cmath>
#include <random>

#include "handsoff/error.hpp"
#include "handsoff/system.hpp"
#include "test_support.hpp"

using namespace handsoff;
using handsoff::testing::max_abs;

namespace {

ControlProblem section4() {
  Vector x0(2);
  x0 << 1.0, -1.0;
  return ControlProblem(LinearSystem::double_integrator(), x0, 5.0);
}

Matrix matrix_power(const Matrix& a, int k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

TEST_CASE("build_discrete on the double integrator") {
  const DiscreteProblem dp = build_discrete(section4(), 1000);
  CHECK(dp.delta == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(std::abs(dp.N * dp.delta - 5.0) <= 1e-12);
  CHECK(dp.Phi.cols() == 2000);
  CHECK(std::abs(dp.zeta(0) - (-4.0)) <= 1e-10);
  CHECK(std::abs(dp.zeta(1) - (-1.0)) <= 1e-12);
  // column order within a block is [B, -B]
  CHECK(dp.Bd(1, 0) == doctest::Approx(0.005));
  CHECK(dp.Bd(1, 1) == doctest::Approx(-0.005));
}

TEST_CASE("build_discrete scalar integrator") {
  Matrix A = Matrix::Zero(1, 1);
  Matrix B = Matrix::Ones(1, 1);
  Vector x0(1);
  x0 << 2.0;
  const DiscreteProblem dp = build_discrete(ControlProblem(LinearSystem(A, B), x0, 1.0), 2);
  Matrix phi(1, 4);
  phi << 0.5, -0.5, 0.5, -0.5;
  CHECK(max_abs(dp.Phi - phi) <= 1e-15);
  CHECK(dp.zeta(0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("a single interval gives Phi = Bd and zeta = Ad x0") {
  std::mt19937_64 rng(5);
  const Matrix A = handsoff::testing::random_matrix(rng, 3, 3, 1.0);
  const Matrix B = handsoff::testing::random_matrix(rng, 3, 2, 1.0);
  const Vector x0 = handsoff::testing::random_matrix(rng, 3, 1, 1.0);
  const DiscreteProblem dp = build_discrete(ControlProblem(LinearSystem(A, B), x0, 0.7), 1);
  CHECK(max_abs(dp.Phi - dp.Bd) == 0.0);
  CHECK(max_abs(dp.zeta - dp.Ad * x0) <= 1e-15);
}

TEST_CASE("Phi block structure matches Ad^(N-1-k) Bd") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + trial % 3);
    const auto m = static_cast<Eigen::Index>(1 + trial % 2);
    const int N = 1 + trial % 6;
    const ControlProblem cp(LinearSystem(handsoff::testing::random_matrix(rng, n, n, 1.0),
                                         handsoff::testing::random_matrix(rng, n, m, 1.0)),
                            handsoff::testing::random_matrix(rng, n, 1, 1.0), 1.3);
    const DiscreteProblem dp = build_discrete(cp, N);
    for (int k = 0; k < N; ++k) {
      const Matrix block = matrix_power(dp.Ad, N - 1 - k) * dp.Bd;
      CHECK(max_abs(dp.Phi.middleCols(2 * m * k, 2 * m) - block) <= 1e-10);
    }
    CHECK(max_abs(dp.zeta - matrix_power(dp.Ad, N) * cp.x0) <= 1e-10);
  }
}

TEST_CASE("simulate") {
  SUBCASE("unforced response") {
    const DiscreteProblem dp = build_discrete(section4(), 10);
    const auto xs = simulate(dp, dp.x0, Vector::Zero(dp.num_vars()));
    REQUIRE(xs.size() == 11u);
    for (int k = 0; k <= 10; ++k) {
      CHECK(max_abs(xs[k] - matrix_power(dp.Ad, k) * dp.x0) <= 1e-12);
    }
  }
  SUBCASE("hand-stepped double integrator") {
    const ControlProblem cp(LinearSystem::double_integrator(), Vector::Zero(2), 2.0);
    const DiscreteProblem dp = build_discrete(cp, 2);
    Vector z = Vector::Zero(4);
    z(0) = 1.0;  // v_d[0]
    const auto xs = simulate(dp, Vector::Zero(2), z);
    CHECK(std::abs(xs[2](0) - 1.5) <= 1e-12);
    CHECK(std::abs(xs[2](1) - 1.0) <= 1e-12);
  }
  SUBCASE("length mismatch") {
    const DiscreteProblem dp = build_discrete(section4(), 4);
    CHECK_THROWS_AS(simulate(dp, dp.x0, Vector::Zero(3)), Error);
  }
}

TEST_CASE("stacked form matches simulation on random controls") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ControlProblem cp(LinearSystem(handsoff::testing::random_matrix(rng, 3, 3, 1.0),
                                       handsoff::testing::random_matrix(rng, 3, 2, 1.0)),
                          handsoff::testing::random_matrix(rng, 3, 1, 1.0), 2.0);
  const DiscreteProblem dp = build_discrete(cp, 25);
  for (int trial = 0; trial < 100; ++trial) {
    Vector z(dp.num_vars());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = unit(rng);
    const Vector end = simulate(dp, dp.x0, z).back();
    CHECK(max_abs(end - (dp.zeta + dp.Phi * z)) <= 1e-9);
  }
}

TEST_CASE("check_feasible") {
  SUBCASE("origin is feasible with zero witness") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
      const ControlProblem cp(LinearSystem(handsoff::testing::random_matrix(rng, 2, 2, 2.0),
                                           handsoff::testing::random_matrix(rng, 2, 1, 1.0)),
                              Vector::Zero(2), 1.0 + trial);
      const auto res = check_feasible(build_discrete(cp, 20));
      CHECK(res.feasible);
      CHECK(res.witness.lpNorm<Eigen::Infinity>() == 0.0);
    }
  }
  SUBCASE("paper example is feasible") {
    const DiscreteProblem dp = build_discrete(section4(), 1000);
    const auto res = check_feasible(dp);
    REQUIRE(res.feasible);
    CHECK((dp.Phi * res.witness + dp.zeta).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(res.witness.minCoeff() >= 0.0);
    CHECK(res.witness.maxCoeff() <= 1.0);
  }
  SUBCASE("far initial state is infeasible") {
    Vector x0(2);
    x0 << 100.0, 0.0;
    const ControlProblem cp(LinearSystem::double_integrator(), x0, 1.0);
    const auto res = check_feasible(build_discrete(cp, 100));
    CHECK_FALSE(res.feasible);
    CHECK(res.phase1_value > 1e-8);
  }
}

TEST_CASE("problem construction errors") {
  CHECK_THROWS_AS(LinearSystem(Matrix::Zero(2, 3), Matrix::Zero(2, 1)), Error);
  CHECK_THROWS_AS(LinearSystem(Matrix::Zero(2, 2), Matrix::Zero(3, 1)), Error);
  CHECK_THROWS_AS(ControlProblem(LinearSystem::double_integrator(), Vector::Zero(3), 1.0),
                  Error);
  CHECK_THROWS_AS(ControlProblem(LinearSystem::double_integrator(), Vector::Zero(2), 0.0),
                  Error);
  CHECK_THROWS_AS(build_discrete(section4(), 0), Error);
  CHECK(LinearSystem::double_integrator().is_double_integrator());
}
