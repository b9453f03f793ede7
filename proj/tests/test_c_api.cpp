#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "handsoff/handsoff.h"

namespace {

const double kA[] = {0.0, 1.0, 0.0, 0.0};
const double kB[] = {0.0, 1.0};

hoc_problem* double_integrator(double x1, double x2, double T, int N) {
  const double x0[] = {x1, x2};
  hoc_problem* p = nullptr;
  REQUIRE(hoc_problem_create(2, 1, kA, kB, x0, T, N, &p) == HOC_OK);
  return p;
}

}  // namespace

TEST_CASE("version and error text") {
  CHECK(std::string(hoc_version()) == "0.1.0");
  hoc_penalty* pen = nullptr;
  CHECK(hoc_penalty_create("bogus", 1.0, 0.0, 0.0, &pen) == HOC_ERR_PARAMETER);
  CHECK(pen == nullptr);
  CHECK(std::string(hoc_last_error()).find("bogus") != std::string::npos);
}

TEST_CASE("penalty lifecycle") {
  hoc_penalty* pen = nullptr;
  REQUIRE(hoc_penalty_create("mcp", 1.0, 0.5, 0.0, &pen) == HOC_OK);
  CHECK(std::string(hoc_penalty_kind(pen)) == "mcp");
  CHECK(std::string(hoc_penalty_label(pen)) == "mcp(lambda=1,alpha=0.5)");
  double lambda = 0, alpha = 0, p = 0;
  CHECK(hoc_penalty_params(pen, &lambda, &alpha, &p) == HOC_OK);
  CHECK(lambda == 1.0);
  CHECK(alpha == 0.5);

  double v = 0.0;
  CHECK(hoc_penalty_psi(pen, 1.0, &v) == HOC_OK);
  CHECK(v == doctest::Approx(0.25));
  CHECK(hoc_penalty_phi(pen, 1.0, &v) == HOC_OK);
  CHECK(v == doctest::Approx(0.75));
  CHECK(hoc_penalty_subgradient(pen, 0.0, 1e-8, &v) == HOC_OK);
  CHECK(v == doctest::Approx(0.0));
  CHECK(hoc_penalty_equivalence_constant(pen, &v) == HOC_OK);
  CHECK(v == doctest::Approx(0.25));
  CHECK(hoc_penalty_psi(pen, 1.5, &v) == HOC_ERR_DOMAIN);
  CHECK(hoc_penalty_subgradient(pen, -0.1, 1e-8, &v) == HOC_ERR_DOMAIN);

  hoc_assumption_report rep{};
  CHECK(hoc_penalty_validate(pen, 10000, &rep) == HOC_OK);
  CHECK(rep.passed == 1);
  CHECK(rep.violated_mask == 0);
  CHECK(rep.grid_size == 10000);
  CHECK(hoc_penalty_validate(pen, 10, &rep) == HOC_ERR_DOMAIN);
  hoc_penalty_free(pen);
  hoc_penalty_free(nullptr);
}

TEST_CASE("penalty parsing and assumption tags") {
  hoc_penalty* pen = nullptr;
  REQUIRE(hoc_penalty_parse("l1l2 lambda=1.0", &pen) == HOC_OK);
  hoc_assumption_report rep{};
  CHECK(hoc_penalty_validate(pen, 10000, &rep) == HOC_OK);
  CHECK(rep.passed == 0);
  CHECK(rep.violated_mask == HOC_ASSUMPTION_A3);
  double c = 0.0;
  CHECK(hoc_penalty_equivalence_constant(pen, &c) == HOC_ERR_ASSUMPTION);
  hoc_penalty_free(pen);

  pen = nullptr;
  CHECK(hoc_penalty_parse("scad lambda=1.5 alpha=3", &pen) == HOC_ERR_PARAMETER);
  CHECK(pen == nullptr);
  CHECK(std::string(hoc_last_error()).find("(0, 1)") != std::string::npos);
  CHECK(hoc_penalty_parse("lsp alpha=1", &pen) == HOC_ERR_PARAMETER);
  CHECK(hoc_penalty_parse(nullptr, &pen) == HOC_ERR_NULL_ARGUMENT);
  CHECK(hoc_penalty_parse("mcp lambda=1 alpha=1", nullptr) == HOC_ERR_NULL_ARGUMENT);
}

TEST_CASE("problem creation and queries") {
  hoc_problem* p = double_integrator(1.0, -1.0, 5.0, 1000);
  int n = 0, m = 0, N = 0;
  double delta = 0.0;
  CHECK(hoc_problem_dims(p, &n, &m, &N, &delta) == HOC_OK);
  CHECK(n == 2);
  CHECK(m == 1);
  CHECK(N == 1000);
  CHECK(delta == doctest::Approx(0.005));
  CHECK(hoc_problem_is_double_integrator(p) == 1);
  double zeta[2];
  CHECK(hoc_problem_drift(p, zeta) == HOC_OK);
  CHECK(zeta[0] == doctest::Approx(-4.0));
  CHECK(zeta[1] == doctest::Approx(-1.0));
  int feasible = 0;
  double phase1 = -1.0;
  CHECK(hoc_problem_check_feasible(p, 1e-8, &feasible, &phase1) == HOC_OK);
  CHECK(feasible == 1);
  CHECK(phase1 <= 1e-8);
  hoc_problem_free(p);

  p = double_integrator(100.0, 0.0, 1.0, 50);
  CHECK(hoc_problem_check_feasible(p, 1e-8, &feasible, &phase1) == HOC_OK);
  CHECK(feasible == 0);
  CHECK(phase1 > 1.0);
  hoc_problem_free(p);

  const double x0[] = {0.0, 0.0};
  hoc_problem* bad = nullptr;
  CHECK(hoc_problem_create(2, 1, kA, kB, x0, -1.0, 10, &bad) == HOC_ERR_DOMAIN);
  CHECK(hoc_problem_create(2, 1, kA, kB, x0, 1.0, 0, &bad) != HOC_OK);
  CHECK(hoc_problem_create(0, 1, kA, kB, x0, 1.0, 10, &bad) != HOC_OK);
  CHECK(hoc_problem_create(2, 1, nullptr, kB, x0, 1.0, 10, &bad) == HOC_ERR_NULL_ARGUMENT);
  const double nan_a[] = {0.0, NAN, 0.0, 0.0};
  CHECK(hoc_problem_create(2, 1, nan_a, kB, x0, 1.0, 10, &bad) == HOC_ERR_DOMAIN);
  CHECK(bad == nullptr);
  CHECK(hoc_problem_is_double_integrator(nullptr) == 0);
}

TEST_CASE("dca run and result accessors") {
  hoc_problem* p = double_integrator(1.0, -1.0, 5.0, 1000);
  hoc_penalty* pen = nullptr;
  REQUIRE(hoc_penalty_parse("l1l2 lambda=0.1", &pen) == HOC_OK);
  hoc_dca_config cfg;
  hoc_dca_config_default(&cfg);
  CHECK(cfg.max_iter == 50);
  CHECK(cfg.warm_start == HOC_WARM_ZERO);
  cfg.warm_start = HOC_WARM_L1;
  hoc_result* res = nullptr;
  REQUIRE(hoc_dca_run(p, pen, &cfg, &res) == HOC_OK);

  hoc_result_summary sum{};
  CHECK(hoc_result_summary_get(res, &sum) == HOC_OK);
  CHECK(sum.lp_solves <= 10);
  CHECK(sum.lp_solves == sum.iterations + 1);
  CHECK(std::fabs(sum.l0 - 1.0) <= 0.01);
  CHECK(sum.feas_residual <= 1e-8);
  CHECK(sum.max_kkt_residual <= 1e-8);
  CHECK(sum.stop_reason != nullptr);

  const double* data = nullptr;
  std::size_t len = 0;
  CHECK(hoc_result_cost_history(res, &data, &len) == HOC_OK);
  CHECK(len == static_cast<std::size_t>(sum.iterations) + 1);
  CHECK(data[len - 1] == sum.cost);
  CHECK(hoc_result_feas_history(res, &data, &len) == HOC_OK);
  CHECK(hoc_result_split(res, &data, &len) == HOC_OK);
  CHECK(len == 2000u);
  int rows = 0, cols = 0;
  CHECK(hoc_result_control(res, &data, &rows, &cols) == HOC_OK);
  CHECK(rows == 1000);
  CHECK(cols == 1);
  CHECK(hoc_result_states(res, &data, &rows, &cols) == HOC_OK);
  CHECK(rows == 1001);
  CHECK(cols == 2);
  CHECK(data[0] == 1.0);
  CHECK(data[1] == -1.0);
  CHECK(std::fabs(data[2000]) <= 1e-6);
  CHECK(std::fabs(data[2001]) <= 1e-6);

  double under = 0.0;
  CHECK(hoc_result_cost_under(res, pen, &under) == HOC_OK);
  CHECK(under == doctest::Approx(sum.cost));

  hoc_certificate_tolerances tols;
  hoc_certificate_tolerances_default(&tols, 0);
  CHECK(tols.value_tol == 1e-3);
  CHECK(tols.l0_tol == 0.01);
  hoc_certificate_report cert{};
  CHECK(hoc_double_integrator_certificate(p, res, &tols, &cert) == HOC_OK);
  CHECK(cert.passed == 1);
  CHECK(cert.l0_expected == 1.0);
  CHECK(cert.dblint_expected == 4.0);
  CHECK(hoc_double_integrator_certificate(p, res, nullptr, &cert) == HOC_OK);

  hoc_result_free(res);
  hoc_penalty_free(pen);
  hoc_problem_free(p);
}

TEST_CASE("l1 baseline and error paths") {
  hoc_problem* p = double_integrator(1.0, -1.0, 5.0, 200);
  hoc_result* res = nullptr;
  REQUIRE(hoc_l1_solve(p, nullptr, &res) == HOC_OK);
  hoc_result_summary sum{};
  CHECK(hoc_result_summary_get(res, &sum) == HOC_OK);
  CHECK(sum.lp_solves == 1);
  CHECK(sum.cost == doctest::Approx(40.0).epsilon(1e-9));  // one second of full effort at delta = 0.025
  hoc_result_free(res);

  hoc_penalty* bad = nullptr;
  REQUIRE(hoc_penalty_parse("capped_l1 lambda=0.8 alpha=1", &bad) == HOC_OK);
  res = nullptr;
  CHECK(hoc_dca_run(p, bad, nullptr, &res) == HOC_ERR_ASSUMPTION);
  CHECK(res == nullptr);
  hoc_penalty_free(bad);
  hoc_problem_free(p);

  hoc_penalty* pen = nullptr;
  REQUIRE(hoc_penalty_parse("mcp lambda=1 alpha=0.5", &pen) == HOC_OK);
  p = double_integrator(100.0, 0.0, 1.0, 50);
  CHECK(hoc_dca_run(p, pen, nullptr, &res) == HOC_ERR_INFEASIBLE);
  CHECK(std::string(hoc_last_error()).find("phase-1") != std::string::npos);
  hoc_dca_config cfg;
  hoc_dca_config_default(&cfg);
  cfg.max_iter = 0;
  CHECK(hoc_dca_run(p, pen, &cfg, &res) == HOC_ERR_DOMAIN);
  CHECK(hoc_dca_run(nullptr, pen, nullptr, &res) == HOC_ERR_NULL_ARGUMENT);
  hoc_problem_free(p);

  hoc_problem* tri = nullptr;
  const double A3[] = {0, 1, 0, 0, 0, 1, 0, 0, 0};
  const double B3[] = {0, 0, 1};
  const double x3[] = {0, 0, 0};
  REQUIRE(hoc_problem_create(3, 1, A3, B3, x3, 1.0, 10, &tri) == HOC_OK);
  REQUIRE(hoc_dca_run(tri, pen, nullptr, &res) == HOC_OK);
  hoc_certificate_report cert{};
  CHECK(hoc_double_integrator_certificate(tri, res, nullptr, &cert) == HOC_ERR_DIMENSION);
  hoc_result_free(res);
  hoc_problem_free(tri);
  hoc_penalty_free(pen);
}

TEST_CASE("exact instances and brute force") {
  const double planted[] = {1, 0, 0, 0, 0, 0, 0, -1};
  double x0[2];
  REQUIRE(hoc_make_exact_instance(2, 1, kA, kB, 8.0, 8, planted, x0) == HOC_OK);
  hoc_problem* p = double_integrator(x0[0], x0[1], 8.0, 8);
  hoc_brute_force_report bf{};
  CHECK(hoc_brute_force_l0(p, 1e-8, &bf) == HOC_OK);
  CHECK(bf.found == 1);
  CHECK(bf.min_l0 == doctest::Approx(2.0));
  CHECK(bf.minimizers == 1u);
  CHECK(bf.feasible_points >= 1);
  hoc_problem_free(p);

  p = double_integrator(0.5, 0.5, 2.0, 17);
  CHECK(hoc_brute_force_l0(p, 1e-8, &bf) == HOC_ERR_SIZE);
  hoc_problem_free(p);
  CHECK(hoc_make_exact_instance(2, 1, kA, kB, 8.0, 8, nullptr, x0) == HOC_ERR_NULL_ARGUMENT);
}
