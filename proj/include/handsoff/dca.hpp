#pragma once

#include <vector>

#include "handsoff/linalg.hpp"
#include "handsoff/lp.hpp"
#include "handsoff/penalty.hpp"
#include "handsoff/system.hpp"

namespace handsoff {

/// Nonnegative split (v, w) stacked as [v[0]; w[0]; ...; v[N-1]; w[N-1]].
struct SplitControl {
  double delta = 0.0;
  int N = 0;
  Eigen::Index m = 0;
  Vector z;

  auto v(int k) const { return z.segment(2 * m * k, m); }
  auto w(int k) const { return z.segment(2 * m * k + m, m); }
};

/// Piecewise-constant control; row k of samples is u_d[k].
struct ControlSignal {
  double delta = 0.0;
  Matrix samples;  // N x m

  int N() const { return static_cast<int>(samples.rows()); }
  Eigen::Index m() const { return samples.cols(); }
};

enum class WarmStart { kZero, kL1 };
enum class StopReason { kCostStall, kStepStall, kMaxIter };

const char* to_string(WarmStart ws);
const char* to_string(StopReason reason);

struct DcaConfig {
  double cost_tol = 1e-8;
  double step_tol = 1e-9;
  int max_iter = 50;
  double lp_tol = kDefaultLpTol;
  double l0_threshold = 1e-6;
  double lp_epsilon = kDefaultLpEpsilon;
  WarmStart warm_start = WarmStart::kZero;

  /// Throws a domain error on non-positive tolerances or max_iter < 1.
  void validate() const;
};

struct DcaResult {
  SplitControl z_star;
  ControlSignal u_star;
  /// J_d at every feasible iterate, starting from z[0] for the L1 warm
  /// start and from z[1] otherwise.
  std::vector<double> cost_history;
  /// ||Phi z[l] + zeta||_inf for l >= 1.
  std::vector<double> feas_history;
  int iterations = 0;  // LP subproblems solved inside the DC loop
  int lp_solves = 0;   // including the warm-start LP
  StopReason stop = StopReason::kMaxIter;
  double l0 = 0.0;
  double feas_residual = 0.0;
  double complementarity_violation = 0.0;
  double bob_deviation = 0.0;
  double max_kkt_residual = 0.0;
  int lp_pivots = 0;
};

/// g(z) - h(z) = sum_i (z_i - phi(z_i)). Entries may overshoot [0, 1] by
/// at most tol and are clamped; anything further out is a domain error.
double cost_jd(const Penalty& pen, const Vector& z, double tol = 1e-8);
double cost_jd(const Penalty& pen, const SplitControl& sc, double tol = 1e-8);

/// DC algorithm: linearize h at z[l] with phi_subgradient and solve the LP
///   min (1 - s[l])' z  s.t.  Phi z + zeta = 0,  z in [0, 1].
/// Throws InfeasibleError when the terminal constraint cannot be met and a
/// numerical error naming the iteration if an LP fails.
DcaResult run_dca(const DiscreteProblem& dp, const Penalty& pen,
                  const DcaConfig& cfg = {});

/// The L1-optimal discretized control (the LP with s = 0). The result's
/// cost_history holds the single L1 value sum(z).
DcaResult solve_l1(const DiscreteProblem& dp, const DcaConfig& cfg = {});

SplitControl split_control(const ControlSignal& u);
ControlSignal recombine(const SplitControl& sc);

/// delta * #{(k, j) : |u_d[k]_j| > theta}
double l0_measure(const ControlSignal& u, double theta);

/// Largest distance of any sample entry to {-1, 0, 1}.
double bang_off_bang_deviation(const ControlSignal& u);

/// max_{k,j} min(v_d[k]_j, w_d[k]_j)
double complementarity_violation(const SplitControl& sc);

}  // namespace handsoff
