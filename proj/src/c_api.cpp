#include "handsoff/handsoff.h"

#include <exception>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "handsoff/dca.hpp"
#include "handsoff/error.hpp"
#include "handsoff/oracle.hpp"
#include "handsoff/penalty.hpp"
#include "handsoff/system.hpp"

struct hoc_penalty {
  handsoff::Penalty pen;
  std::string label;
};

struct hoc_problem {
  handsoff::ControlProblem problem;
  handsoff::DiscreteProblem dp;
};

struct hoc_result {
  handsoff::DcaResult res;
  std::vector<double> control;  // row-major N x m
  std::vector<double> states;   // row-major (N + 1) x n
  int n = 0;
};

namespace {

thread_local std::string g_last_error;

hoc_status map_code(handsoff::ErrorCode code) {
  using handsoff::ErrorCode;
  switch (code) {
    case ErrorCode::kDimension:
      return HOC_ERR_DIMENSION;
    case ErrorCode::kDomain:
      return HOC_ERR_DOMAIN;
    case ErrorCode::kParameter:
      return HOC_ERR_PARAMETER;
    case ErrorCode::kInfeasible:
      return HOC_ERR_INFEASIBLE;
    case ErrorCode::kNumerical:
      return HOC_ERR_NUMERICAL;
    case ErrorCode::kAssumption:
      return HOC_ERR_ASSUMPTION;
    case ErrorCode::kSize:
      return HOC_ERR_SIZE;
  }
  return HOC_ERR_INTERNAL;
}

template <typename F>
hoc_status guarded(F&& body) {
  try {
    body();
    return HOC_OK;
  } catch (const handsoff::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HOC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HOC_ERR_INTERNAL;
  }
}

hoc_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return HOC_ERR_NULL_ARGUMENT;
}

#define HOC_REQUIRE(ptr) \
  if ((ptr) == nullptr) return null_arg(#ptr)

handsoff::DcaConfig to_config(const hoc_dca_config* cfg) {
  handsoff::DcaConfig out;
  if (cfg == nullptr) return out;
  out.cost_tol = cfg->cost_tol;
  out.step_tol = cfg->step_tol;
  out.max_iter = cfg->max_iter;
  out.lp_tol = cfg->lp_tol;
  out.l0_threshold = cfg->l0_threshold;
  out.lp_epsilon = cfg->lp_epsilon;
  out.warm_start = cfg->warm_start == HOC_WARM_L1 ? handsoff::WarmStart::kL1
                                                  : handsoff::WarmStart::kZero;
  return out;
}

handsoff::LinearSystem make_system(int n, int m, const double* A, const double* B) {
  if (n < 1 || m < 1) {
    throw handsoff::Error(handsoff::ErrorCode::kDimension, "n and m must be positive");
  }
  const auto nn = static_cast<std::size_t>(n);
  const auto mm = static_cast<std::size_t>(m);
  return handsoff::LinearSystem(
      handsoff::make_matrix(n, n, std::span<const double>(A, nn * nn)),
      handsoff::make_matrix(n, m, std::span<const double>(B, nn * mm)));
}

hoc_result* wrap_result(const hoc_problem& p, handsoff::DcaResult res) {
  auto out = new hoc_result{std::move(res), {}, {}, static_cast<int>(p.dp.n)};
  const auto& u = out->res.u_star.samples;
  out->control.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) out->control.push_back(u(k, j));
  }
  const auto states = handsoff::simulate(p.dp, p.dp.x0, out->res.z_star.z);
  out->states.reserve(states.size() * static_cast<std::size_t>(p.dp.n));
  for (const auto& x : states) {
    for (Eigen::Index i = 0; i < x.size(); ++i) out->states.push_back(x(i));
  }
  return out;
}

}  // namespace

extern "C" {

const char* hoc_last_error(void) { return g_last_error.c_str(); }

const char* hoc_version(void) { return "0.1.0"; }

hoc_status hoc_penalty_create(const char* kind, double lambda, double alpha, double p,
                              hoc_penalty** out) {
  HOC_REQUIRE(kind);
  HOC_REQUIRE(out);
  return guarded([&] {
    auto pen = handsoff::Penalty::make(handsoff::parse_penalty_kind(kind), lambda, alpha, p);
    *out = new hoc_penalty{pen, pen.label()};
  });
}

hoc_status hoc_penalty_parse(const char* spec, hoc_penalty** out) {
  HOC_REQUIRE(spec);
  HOC_REQUIRE(out);
  return guarded([&] {
    auto pen = handsoff::parse_penalty_spec(spec);
    *out = new hoc_penalty{pen, pen.label()};
  });
}

void hoc_penalty_free(hoc_penalty* pen) { delete pen; }

const char* hoc_penalty_kind(const hoc_penalty* pen) {
  return pen == nullptr ? "" : handsoff::to_string(pen->pen.kind());
}

const char* hoc_penalty_label(const hoc_penalty* pen) {
  return pen == nullptr ? "" : pen->label.c_str();
}

hoc_status hoc_penalty_params(const hoc_penalty* pen, double* lambda, double* alpha,
                              double* p) {
  HOC_REQUIRE(pen);
  if (lambda) *lambda = pen->pen.lambda();
  if (alpha) *alpha = pen->pen.alpha();
  if (p) *p = pen->pen.p();
  return HOC_OK;
}

hoc_status hoc_penalty_psi(const hoc_penalty* pen, double u, double* out) {
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] { *out = pen->pen.psi(u); });
}

hoc_status hoc_penalty_phi(const hoc_penalty* pen, double u, double* out) {
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] { *out = pen->pen.phi(u); });
}

hoc_status hoc_penalty_subgradient(const hoc_penalty* pen, double u, double eps,
                                   double* out) {
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] { *out = pen->pen.phi_subgradient(u, eps); });
}

hoc_status hoc_penalty_equivalence_constant(const hoc_penalty* pen, double* out) {
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] { *out = pen->pen.equivalence_constant(); });
}

hoc_status hoc_penalty_validate(const hoc_penalty* pen, int grid_size,
                                hoc_assumption_report* out) {
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] {
    const auto rep = handsoff::validate_assumption(pen->pen, grid_size);
    out->passed = rep.passed ? 1 : 0;
    out->violated_mask = 0;
    for (auto tag : rep.violated) out->violated_mask |= 1 << static_cast<int>(tag);
    out->worst_margin = rep.worst_margin;
    out->witness_u = rep.witness_u;
    out->grid_size = grid_size;
  });
}

hoc_status hoc_problem_create(int n, int m, const double* A, const double* B,
                              const double* x0, double T, int N, hoc_problem** out) {
  HOC_REQUIRE(A);
  HOC_REQUIRE(B);
  HOC_REQUIRE(x0);
  HOC_REQUIRE(out);
  return guarded([&] {
    handsoff::ControlProblem cp(
        make_system(n, m, A, B),
        handsoff::make_vector(std::span<const double>(x0, static_cast<std::size_t>(n))), T);
    auto dp = handsoff::build_discrete(cp, N);
    *out = new hoc_problem{std::move(cp), std::move(dp)};
  });
}

void hoc_problem_free(hoc_problem* problem) { delete problem; }

hoc_status hoc_problem_dims(const hoc_problem* problem, int* n, int* m, int* N,
                            double* delta) {
  HOC_REQUIRE(problem);
  if (n) *n = static_cast<int>(problem->dp.n);
  if (m) *m = static_cast<int>(problem->dp.m);
  if (N) *N = problem->dp.N;
  if (delta) *delta = problem->dp.delta;
  return HOC_OK;
}

int hoc_problem_is_double_integrator(const hoc_problem* problem) {
  return problem != nullptr && problem->problem.system.is_double_integrator() ? 1 : 0;
}

hoc_status hoc_problem_check_feasible(const hoc_problem* problem, double tol,
                                      int* feasible, double* phase1_value) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(feasible);
  return guarded([&] {
    const auto res = handsoff::check_feasible(problem->dp, tol);
    *feasible = res.feasible ? 1 : 0;
    if (phase1_value) *phase1_value = res.phase1_value;
  });
}

hoc_status hoc_problem_drift(const hoc_problem* problem, double* zeta_out) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(zeta_out);
  return guarded([&] {
    for (Eigen::Index i = 0; i < problem->dp.zeta.size(); ++i) zeta_out[i] = problem->dp.zeta(i);
  });
}

hoc_status hoc_make_exact_instance(int n, int m, const double* A, const double* B,
                                   double T, int N, const double* planted,
                                   double* x0_out) {
  HOC_REQUIRE(A);
  HOC_REQUIRE(B);
  HOC_REQUIRE(planted);
  HOC_REQUIRE(x0_out);
  return guarded([&] {
    if (N < 1) throw handsoff::Error(handsoff::ErrorCode::kDomain, "N must be at least 1");
    handsoff::ControlSignal u;
    u.delta = T / N;
    u.samples = handsoff::make_matrix(
        N, m, std::span<const double>(planted, static_cast<std::size_t>(N) * m));
    const auto cp = handsoff::make_exact_instance(make_system(n, m, A, B), T, N, u);
    for (int i = 0; i < n; ++i) x0_out[i] = cp.x0(i);
  });
}

void hoc_dca_config_default(hoc_dca_config* cfg) {
  if (cfg == nullptr) return;
  const handsoff::DcaConfig d;
  cfg->cost_tol = d.cost_tol;
  cfg->step_tol = d.step_tol;
  cfg->max_iter = d.max_iter;
  cfg->lp_tol = d.lp_tol;
  cfg->l0_threshold = d.l0_threshold;
  cfg->lp_epsilon = d.lp_epsilon;
  cfg->warm_start = HOC_WARM_ZERO;
}

hoc_status hoc_dca_run(const hoc_problem* problem, const hoc_penalty* pen,
                       const hoc_dca_config* cfg, hoc_result** out) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] {
    *out = wrap_result(*problem, handsoff::run_dca(problem->dp, pen->pen, to_config(cfg)));
  });
}

hoc_status hoc_l1_solve(const hoc_problem* problem, const hoc_dca_config* cfg,
                        hoc_result** out) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(out);
  return guarded([&] {
    *out = wrap_result(*problem, handsoff::solve_l1(problem->dp, to_config(cfg)));
  });
}

void hoc_result_free(hoc_result* result) { delete result; }

hoc_status hoc_result_summary_get(const hoc_result* result, hoc_result_summary* out) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(out);
  const auto& r = result->res;
  out->iterations = r.iterations;
  out->lp_solves = r.lp_solves;
  out->lp_pivots = r.lp_pivots;
  out->stop_reason = handsoff::to_string(r.stop);
  out->cost = r.cost_history.empty() ? 0.0 : r.cost_history.back();
  out->l0 = r.l0;
  out->feas_residual = r.feas_residual;
  out->complementarity_violation = r.complementarity_violation;
  out->bob_deviation = r.bob_deviation;
  out->max_kkt_residual = r.max_kkt_residual;
  return HOC_OK;
}

hoc_status hoc_result_cost_history(const hoc_result* result, const double** data,
                                   size_t* len) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(data);
  HOC_REQUIRE(len);
  *data = result->res.cost_history.data();
  *len = result->res.cost_history.size();
  return HOC_OK;
}

hoc_status hoc_result_feas_history(const hoc_result* result, const double** data,
                                   size_t* len) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(data);
  HOC_REQUIRE(len);
  *data = result->res.feas_history.data();
  *len = result->res.feas_history.size();
  return HOC_OK;
}

hoc_status hoc_result_control(const hoc_result* result, const double** data, int* rows,
                              int* cols) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(data);
  *data = result->control.data();
  if (rows) *rows = result->res.u_star.N();
  if (cols) *cols = static_cast<int>(result->res.u_star.m());
  return HOC_OK;
}

hoc_status hoc_result_split(const hoc_result* result, const double** data, size_t* len) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(data);
  HOC_REQUIRE(len);
  *data = result->res.z_star.z.data();
  *len = static_cast<size_t>(result->res.z_star.z.size());
  return HOC_OK;
}

hoc_status hoc_result_states(const hoc_result* result, const double** data, int* rows,
                             int* cols) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(data);
  *data = result->states.data();
  if (rows) *rows = result->res.u_star.N() + 1;
  if (cols) *cols = result->n;
  return HOC_OK;
}

hoc_status hoc_result_cost_under(const hoc_result* result, const hoc_penalty* pen,
                                 double* out) {
  HOC_REQUIRE(result);
  HOC_REQUIRE(pen);
  HOC_REQUIRE(out);
  return guarded([&] { *out = handsoff::cost_jd(pen->pen, result->res.z_star); });
}

void hoc_certificate_tolerances_default(hoc_certificate_tolerances* tols, int coarse) {
  if (tols == nullptr) return;
  const auto d = coarse ? handsoff::CertificateTolerances::coarse()
                        : handsoff::CertificateTolerances{};
  tols->value_tol = d.value_tol;
  tols->fractional_per_edge = d.fractional_per_edge;
  tols->l0_tol = d.l0_tol;
  tols->dblint_tol = d.dblint_tol;
  tols->terminal_tol = d.terminal_tol;
  tols->theta = d.theta;
}

hoc_status hoc_double_integrator_certificate(const hoc_problem* problem,
                                             const hoc_result* result,
                                             const hoc_certificate_tolerances* tols,
                                             hoc_certificate_report* out) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(result);
  HOC_REQUIRE(out);
  return guarded([&] {
    if (!problem->problem.system.is_double_integrator()) {
      throw handsoff::Error(handsoff::ErrorCode::kDimension,
                            "certificate applies to the double integrator only");
    }
    handsoff::CertificateTolerances t;
    if (tols != nullptr) {
      t.value_tol = tols->value_tol;
      t.fractional_per_edge = tols->fractional_per_edge;
      t.l0_tol = tols->l0_tol;
      t.dblint_tol = tols->dblint_tol;
      t.terminal_tol = tols->terminal_tol;
      t.theta = tols->theta;
    }
    const auto rep = handsoff::double_integrator_certificate(
        result->res.u_star, problem->problem.x0, problem->problem.T, t);
    out->value_deviation = rep.value_deviation;
    out->fractional_samples = rep.fractional_samples;
    out->excused_samples = rep.excused_samples;
    out->support_intervals = rep.support_intervals;
    out->l0_measured = rep.l0_measured;
    out->l0_expected = rep.l0_expected;
    out->dblint_measured = rep.dblint_measured;
    out->dblint_expected = rep.dblint_expected;
    out->terminal_norm = rep.terminal_norm;
    out->passed = rep.passed ? 1 : 0;
  });
}

hoc_status hoc_brute_force_l0(const hoc_problem* problem, double eps,
                              hoc_brute_force_report* out) {
  HOC_REQUIRE(problem);
  HOC_REQUIRE(out);
  return guarded([&] {
    const auto res = handsoff::brute_force_l0(problem->dp, eps);
    out->found = res.found ? 1 : 0;
    out->min_l0 = res.min_l0;
    out->minimizers = res.minimizers.size();
    out->feasible_points = res.feasible_points;
  });
}

}  // extern "C"
