/* C interface to the hands-off control library.
 *
 * Every function returns an hoc_status. On failure the message is available
 * from hoc_last_error() on the calling thread until the next failing call.
 * Objects are opaque handles released with the matching *_free function.
 * Arrays are row-major. Pointers returned by accessors stay valid until the
 * owning handle is freed.
 */
#ifndef HANDSOFF_HANDSOFF_H_
#define HANDSOFF_HANDSOFF_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(HANDSOFF_BUILDING_LIBRARY)
#define HOC_API __declspec(dllexport)
#else
#define HOC_API __declspec(dllimport)
#endif
#else
#define HOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* The first six values double as CLI exit codes. */
typedef enum hoc_status {
  HOC_OK = 0,
  HOC_ERR_CONFIG = 1,
  HOC_ERR_INFEASIBLE = 2,
  HOC_ERR_NUMERICAL = 3,
  HOC_ERR_ASSUMPTION = 4,
  HOC_ERR_SIZE = 5,
  HOC_ERR_DIMENSION = 6,
  HOC_ERR_DOMAIN = 7,
  HOC_ERR_PARAMETER = 8,
  HOC_ERR_NULL_ARGUMENT = 9,
  HOC_ERR_INTERNAL = 10
} hoc_status;

typedef struct hoc_penalty hoc_penalty;
typedef struct hoc_problem hoc_problem;
typedef struct hoc_result hoc_result;

HOC_API const char* hoc_last_error(void);
HOC_API const char* hoc_version(void);

/* ---- penalties ---------------------------------------------------------- */

/* kind: "lp", "mcp", "scad", "lsp", "capped_l1" or "l1l2". Unused
 * parameters are ignored. */
HOC_API hoc_status hoc_penalty_create(const char* kind, double lambda, double alpha,
                                      double p, hoc_penalty** out);
/* Inline form, e.g. "scad lambda=0.25 alpha=3". */
HOC_API hoc_status hoc_penalty_parse(const char* spec, hoc_penalty** out);
HOC_API void hoc_penalty_free(hoc_penalty* pen);

HOC_API const char* hoc_penalty_kind(const hoc_penalty* pen);
HOC_API const char* hoc_penalty_label(const hoc_penalty* pen);
HOC_API hoc_status hoc_penalty_params(const hoc_penalty* pen, double* lambda,
                                      double* alpha, double* p);

HOC_API hoc_status hoc_penalty_psi(const hoc_penalty* pen, double u, double* out);
HOC_API hoc_status hoc_penalty_phi(const hoc_penalty* pen, double u, double* out);
HOC_API hoc_status hoc_penalty_subgradient(const hoc_penalty* pen, double u,
                                           double eps, double* out);
HOC_API hoc_status hoc_penalty_equivalence_constant(const hoc_penalty* pen, double* out);

enum {
  HOC_ASSUMPTION_A1 = 1 << 0,
  HOC_ASSUMPTION_A2 = 1 << 1,
  HOC_ASSUMPTION_A3 = 1 << 2,
  HOC_ASSUMPTION_A4 = 1 << 3
};

typedef struct hoc_assumption_report {
  int passed;
  int violated_mask; /* HOC_ASSUMPTION_* bits */
  double worst_margin;
  double witness_u;
  int grid_size;
} hoc_assumption_report;

HOC_API hoc_status hoc_penalty_validate(const hoc_penalty* pen, int grid_size,
                                        hoc_assumption_report* out);

/* ---- problems ----------------------------------------------------------- */

/* A is n x n, B is n x m, x0 has length n. The horizon [0, T] is split into
 * N zero-order-hold intervals. */
HOC_API hoc_status hoc_problem_create(int n, int m, const double* A, const double* B,
                                      const double* x0, double T, int N,
                                      hoc_problem** out);
HOC_API void hoc_problem_free(hoc_problem* problem);

HOC_API hoc_status hoc_problem_dims(const hoc_problem* problem, int* n, int* m, int* N,
                                    double* delta);
HOC_API int hoc_problem_is_double_integrator(const hoc_problem* problem);
HOC_API hoc_status hoc_problem_check_feasible(const hoc_problem* problem, double tol,
                                              int* feasible, double* phase1_value);

/* Unforced terminal state e^{AT} x0, length n. */
HOC_API hoc_status hoc_problem_drift(const hoc_problem* problem, double* zeta_out);
/* Writes x0 such that the planted grid signal (N x m, entries -1/0/1 or any
 * value in [-1, 1]) drives it exactly to the origin. */
HOC_API hoc_status hoc_make_exact_instance(int n, int m, const double* A,
                                           const double* B, double T, int N,
                                           const double* planted, double* x0_out);

/* ---- solving ------------------------------------------------------------ */

typedef enum hoc_warm_start { HOC_WARM_ZERO = 0, HOC_WARM_L1 = 1 } hoc_warm_start;

typedef struct hoc_dca_config {
  double cost_tol;
  double step_tol;
  int max_iter;
  double lp_tol;
  double l0_threshold;
  double lp_epsilon;
  hoc_warm_start warm_start;
} hoc_dca_config;

HOC_API void hoc_dca_config_default(hoc_dca_config* cfg);

/* cfg may be NULL for defaults. pen must pass hoc_penalty_validate. */
HOC_API hoc_status hoc_dca_run(const hoc_problem* problem, const hoc_penalty* pen,
                               const hoc_dca_config* cfg, hoc_result** out);
/* L1-optimal discretized control (single LP). */
HOC_API hoc_status hoc_l1_solve(const hoc_problem* problem, const hoc_dca_config* cfg,
                                hoc_result** out);
HOC_API void hoc_result_free(hoc_result* result);

typedef struct hoc_result_summary {
  int iterations; /* LP subproblems inside the DC loop */
  int lp_solves;  /* including the warm start */
  int lp_pivots;
  const char* stop_reason;
  double cost; /* last entry of the cost history */
  double l0;
  double feas_residual;
  double complementarity_violation;
  double bob_deviation;
  double max_kkt_residual;
} hoc_result_summary;

HOC_API hoc_status hoc_result_summary_get(const hoc_result* result,
                                          hoc_result_summary* out);
HOC_API hoc_status hoc_result_cost_history(const hoc_result* result, const double** data,
                                           size_t* len);
HOC_API hoc_status hoc_result_feas_history(const hoc_result* result, const double** data,
                                           size_t* len);
/* N x m control samples. */
HOC_API hoc_status hoc_result_control(const hoc_result* result, const double** data,
                                      int* rows, int* cols);
/* Stacked split vector z of length 2mN. */
HOC_API hoc_status hoc_result_split(const hoc_result* result, const double** data,
                                    size_t* len);
/* (N + 1) x n simulated states. */
HOC_API hoc_status hoc_result_states(const hoc_result* result, const double** data,
                                     int* rows, int* cols);
/* J_d of the result's split vector under pen. */
HOC_API hoc_status hoc_result_cost_under(const hoc_result* result, const hoc_penalty* pen,
                                         double* out);

/* ---- oracles ------------------------------------------------------------ */

typedef struct hoc_certificate_tolerances {
  double value_tol;
  int fractional_per_edge;
  double l0_tol;
  double dblint_tol;
  double terminal_tol;
  double theta;
} hoc_certificate_tolerances;

/* coarse != 0 selects the looser N = 200 tolerances. */
HOC_API void hoc_certificate_tolerances_default(hoc_certificate_tolerances* tols,
                                                int coarse);

typedef struct hoc_certificate_report {
  double value_deviation;
  int fractional_samples;
  int excused_samples;
  int support_intervals;
  double l0_measured;
  double l0_expected;
  double dblint_measured;
  double dblint_expected;
  double terminal_norm;
  int passed;
} hoc_certificate_report;

/* Requires the problem to be the scalar-input double integrator. */
HOC_API hoc_status hoc_double_integrator_certificate(const hoc_problem* problem,
                                                    const hoc_result* result,
                                                    const hoc_certificate_tolerances* tols,
                                                    hoc_certificate_report* out);

typedef struct hoc_brute_force_report {
  int found;
  double min_l0;
  size_t minimizers;
  long long feasible_points;
} hoc_brute_force_report;

/* Exhaustive search over {-1, 0, 1}^{mN}; HOC_ERR_SIZE when mN > 16. */
HOC_API hoc_status hoc_brute_force_l0(const hoc_problem* problem, double eps,
                                      hoc_brute_force_report* out);

#ifdef __cplusplus
}
#endif

#endif /* HANDSOFF_HANDSOFF_H_ */
