#include <doctest.h>

#include <cmath>
#include <random>

#include "handsoff/dca.hpp"
#include "handsoff/error.hpp"
#include "handsoff/oracle.hpp"
#include "test_support.hpp"

using namespace handsoff;

namespace {

Vector example_x0() {
  Vector x0(2);
  x0 << 1.0, -1.0;
  return x0;
}

// Indicator of [a, b) sampled on the grid t_k = k delta.
ControlSignal indicator(int N, double T, double a, double b, double level = 1.0) {
  ControlSignal u;
  u.delta = T / N;
  u.samples = Matrix::Zero(N, 1);
  for (int k = 0; k < N; ++k) {
    const double t = k * u.delta;
    if (t >= a - 1e-12 && t < b - 1e-12) u.samples(k, 0) = level;
  }
  return u;
}

}  // namespace

TEST_CASE("certificate expectations for the example state") {
  const auto u = indicator(1000, 5.0, 0.5, 1.5);
  const auto rep = double_integrator_certificate(u, example_x0(), 5.0);
  CHECK(rep.l0_expected == 1.0);
  CHECK(rep.dblint_expected == 4.0);
}

TEST_CASE("certificate passes the grid-aligned maximum hands-off control") {
  for (int N : {1000, 200}) {
    const auto u = indicator(N, 5.0, 0.5, 1.5);
    const auto tols = N == 1000 ? CertificateTolerances{} : CertificateTolerances::coarse();
    const auto rep = double_integrator_certificate(u, example_x0(), 5.0, tols);
    CHECK(rep.passed);
    CHECK(rep.value_deviation == 0.0);
    CHECK(rep.support_intervals == 1);
    CHECK(std::abs(rep.l0_measured - 1.0) <= 1e-12);
    // Left Riemann sum undershoots the exact value 4 by delta / 2.
    CHECK(std::abs(rep.dblint_measured - (4.0 - 2.5 / N)) <= 1e-9);
    CHECK(rep.terminal_norm <= 1e-10);
  }
}

TEST_CASE("certificate rejects a non-sparse L1-optimal control") {
  // u = 1/2 on [0, 2] has the same L1 norm and reaches the origin.
  const auto u = indicator(1000, 5.0, 0.0, 2.0, 0.5);
  const auto rep = double_integrator_certificate(u, example_x0(), 5.0);
  CHECK(rep.terminal_norm <= 1e-9);
  CHECK_FALSE(rep.passed);
  CHECK(rep.value_deviation == doctest::Approx(0.5));
}

TEST_CASE("certificate excuses fractional samples only at support edges") {
  auto u = indicator(1000, 5.0, 0.5, 1.5);
  u.samples(99, 0) = 0.3;  // just before the support
  auto rep = double_integrator_certificate(u, example_x0(), 5.0);
  CHECK(rep.fractional_samples == 1);
  CHECK(rep.excused_samples == 1);
  CHECK(rep.value_deviation == 0.0);

  u = indicator(1000, 5.0, 0.5, 1.5);
  u.samples(150, 0) = 0.5;  // middle of the support
  rep = double_integrator_certificate(u, example_x0(), 5.0);
  CHECK(rep.value_deviation == doctest::Approx(0.5));
  CHECK_FALSE(rep.passed);

  u = indicator(1000, 5.0, 0.5, 1.5);
  u.samples(800, 0) = -1.0;  // wrong sign is never excused
  rep = double_integrator_certificate(u, example_x0(), 5.0);
  CHECK_FALSE(rep.passed);
}

TEST_CASE("certificate dimension checks") {
  ControlSignal u;
  u.delta = 0.5;
  u.samples = Matrix::Zero(10, 2);
  CHECK_THROWS_AS(double_integrator_certificate(u, example_x0(), 5.0), Error);
  u.samples = Matrix::Zero(9, 1);
  CHECK_THROWS_AS(double_integrator_certificate(u, example_x0(), 5.0), Error);
}

TEST_CASE("brute_force_l0") {
  SUBCASE("origin") {
    const auto dp = build_discrete(
        ControlProblem(LinearSystem::double_integrator(), Vector::Zero(2), 4.0), 6);
    const auto res = brute_force_l0(dp, 1e-8);
    REQUIRE(res.found);
    CHECK(res.min_l0 == 0.0);
    REQUIRE(res.minimizers.size() == 1u);
    CHECK(res.minimizers[0].samples.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("planted pair") {
    ControlSignal planted;
    planted.delta = 1.0;
    planted.samples = Matrix::Zero(8, 1);
    planted.samples(1, 0) = 1.0;
    planted.samples(6, 0) = -1.0;
    const auto dp =
        build_discrete(make_exact_instance(LinearSystem::double_integrator(), 8.0, 8, planted), 8);
    const auto res = brute_force_l0(dp, 1e-8);
    REQUIRE(res.found);
    CHECK(res.min_l0 == doctest::Approx(2.0));
    bool planted_found = false;
    for (const auto& u : res.minimizers) {
      planted_found |= (u.samples - planted.samples).cwiseAbs().maxCoeff() == 0.0;
      const Vector end = dp.Phi * split_control(u).z + dp.zeta;
      CHECK(end.lpNorm<Eigen::Infinity>() <= 1e-8);
    }
    CHECK(planted_found);
  }
  SUBCASE("generic state with eps = 0 has no grid solution") {
    Vector x0(2);
    x0 << 0.123456789, -0.987654321;
    const auto dp = build_discrete(ControlProblem(LinearSystem::double_integrator(), x0, 3.0), 8);
    const auto res = brute_force_l0(dp, 1e-300);
    CHECK_FALSE(res.found);
    CHECK(res.minimizers.empty());
  }
  SUBCASE("size limit") {
    const auto dp = build_discrete(
        ControlProblem(LinearSystem::double_integrator(), Vector::Zero(2), 4.0), 17);
    try {
      brute_force_l0(dp);
      FAIL("expected a size error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSize);
    }
  }
}

TEST_CASE("make_exact_instance") {
  ControlSignal zero;
  zero.delta = 0.5;
  zero.samples = Matrix::Zero(4, 1);
  const auto origin = make_exact_instance(LinearSystem::double_integrator(), 2.0, 4, zero);
  CHECK(origin.x0.lpNorm<Eigen::Infinity>() == 0.0);

  ControlSignal one;
  one.delta = 1.0;
  one.samples = Matrix::Zero(2, 1);
  one.samples(0, 0) = 1.0;
  const auto cp = make_exact_instance(LinearSystem::double_integrator(), 2.0, 2, one);
  const auto dp = build_discrete(cp, 2);
  CHECK(simulate(dp, cp.x0, split_control(one).z).back().lpNorm<Eigen::Infinity>() <= 1e-10);

  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> tern(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearSystem sys(handsoff::testing::random_matrix(rng, 3, 3, 1.5),
                           handsoff::testing::random_matrix(rng, 3, 2, 1.0));
    ControlSignal planted;
    planted.delta = 0.2;
    planted.samples = Matrix::Zero(10, 2);
    for (Eigen::Index i = 0; i < planted.samples.size(); ++i) planted.samples.data()[i] = tern(rng);
    const auto inst = make_exact_instance(sys, 2.0, 10, planted);
    const auto d = build_discrete(inst, 10);
    CHECK(simulate(d, inst.x0, split_control(planted).z).back().lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(check_feasible(d).feasible);
  }
}

TEST_CASE("certificate-passing signals satisfy the discrete cost identity") {
  const auto u = indicator(1000, 5.0, 0.5, 1.5);
  const double a = 1e-6;
  for (const auto& pen : {Penalty::make(PenaltyKind::kMcp, 1.0, 0.5),
                          Penalty::make(PenaltyKind::kLsp, 0.1 / std::log(1.0 + 1.0 / a), a),
                          Penalty::make(PenaltyKind::kLp, 0.8, 0.0, 0.5)}) {
    REQUIRE(double_integrator_certificate(u, example_x0(), 5.0).passed);
    const double l0 = l0_measure(u, 1e-6);
    CHECK(std::abs(cost_jd(pen, split_control(u)) - pen.equivalence_constant() * l0 / u.delta) <=
          1e-6);
  }
}
