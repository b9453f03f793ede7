#include "handsoff/dca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "handsoff/error.hpp"

namespace handsoff {

const char* to_string(WarmStart ws) {
  return ws == WarmStart::kL1 ? "l1" : "zero";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kCostStall:
      return "cost_stall";
    case StopReason::kStepStall:
      return "step_stall";
    case StopReason::kMaxIter:
      return "max_iter";
  }
  return "unknown";
}

void DcaConfig::validate() const {
  const bool ok = cost_tol > 0.0 && step_tol > 0.0 && lp_tol > 0.0 &&
                  l0_threshold > 0.0 && lp_epsilon > 0.0 && max_iter >= 1;
  if (!ok) {
    throw Error(ErrorCode::kDomain,
                "DCA tolerances must be positive and max_iter at least 1");
  }
}

double cost_jd(const Penalty& pen, const Vector& z, double tol) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double zi = z(i);
    if (!(zi >= -tol && zi <= 1.0 + tol)) {
      throw Error(ErrorCode::kDomain,
                  "split control entry " + std::to_string(i) + " outside [0, 1]");
    }
    const double c = std::clamp(zi, 0.0, 1.0);
    total += c - pen.phi(c);
  }
  return total;
}

double cost_jd(const Penalty& pen, const SplitControl& sc, double tol) {
  return cost_jd(pen, sc.z, tol);
}

SplitControl split_control(const ControlSignal& u) {
  SplitControl sc;
  sc.delta = u.delta;
  sc.N = u.N();
  sc.m = u.m();
  sc.z.resize(2 * sc.m * sc.N);
  for (int k = 0; k < sc.N; ++k) {
    for (Eigen::Index j = 0; j < sc.m; ++j) {
      const double x = u.samples(k, j);
      sc.z(2 * sc.m * k + j) = std::max(x, 0.0);
      sc.z(2 * sc.m * k + sc.m + j) = std::max(-x, 0.0);
    }
  }
  return sc;
}

ControlSignal recombine(const SplitControl& sc) {
  ControlSignal u;
  u.delta = sc.delta;
  u.samples.resize(sc.N, sc.m);
  for (int k = 0; k < sc.N; ++k) {
    u.samples.row(k) = (sc.v(k) - sc.w(k)).transpose();
  }
  return u;
}

double l0_measure(const ControlSignal& u, double theta) {
  const auto count = (u.samples.array().abs() > theta).count();
  return u.delta * static_cast<double>(count);
}

double bang_off_bang_deviation(const ControlSignal& u) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < u.samples.size(); ++i) {
    const double a = std::abs(u.samples.data()[i]);
    worst = std::max(worst, std::min(a, std::abs(1.0 - a)));
  }
  return worst;
}

double complementarity_violation(const SplitControl& sc) {
  double worst = 0.0;
  for (int k = 0; k < sc.N; ++k) {
    worst = std::max(worst, sc.v(k).cwiseMin(sc.w(k)).maxCoeff());
  }
  return worst;
}

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}


class SubproblemSolver {
 public:
  SubproblemSolver(const DiscreteProblem& dp, const DcaConfig& cfg)
      : lp_{Vector::Zero(dp.num_vars()), dp.Phi, -dp.zeta}, tol_(cfg.lp_tol) {}

  LpSolution solve(const Vector& c, int iteration) {
    lp_.c = c;
    LpSolution sol = solve_lp(lp_, tol_);
    ++solves_;
    pivots_ += sol.iterations;
    if (sol.status == LpStatus::kInfeasible) {
      throw InfeasibleError(
          "terminal state unreachable with |u| <= 1 (phase-1 value " +
              std::to_string(sol.phase1_objective) + ")",
          sol.phase1_objective);
    }
    if (sol.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumerical,
                  "LP subproblem failed at iteration " + std::to_string(iteration) +
                      " (equality residual " + fmt_g(sol.eq_residual) +
                      ", KKT residual " + fmt_g(sol.kkt_residual) + ")");
    }
    max_kkt_ = std::max(max_kkt_, sol.kkt_residual);
    return sol;
  }

  double residual(const Vector& z) const {
    return (lp_.Aeq * z - lp_.beq).lpNorm<Eigen::Infinity>();
  }

  int solves() const { return solves_; }
  int pivots() const { return pivots_; }
  double max_kkt() const { return max_kkt_; }

 private:
  LpProblem lp_;
  double tol_;
  int solves_ = 0;
  int pivots_ = 0;
  double max_kkt_ = 0.0;
};

DcaResult finish(const DiscreteProblem& dp, const DcaConfig& cfg, const Vector& z,
                 const SubproblemSolver& solver) {
  DcaResult r;
  r.z_star.delta = dp.delta;
  r.z_star.N = dp.N;
  r.z_star.m = dp.m;
  r.z_star.z = z;
  r.u_star = recombine(r.z_star);
  r.l0 = l0_measure(r.u_star, cfg.l0_threshold);
  r.feas_residual = solver.residual(z);
  r.complementarity_violation = complementarity_violation(r.z_star);
  r.bob_deviation = bang_off_bang_deviation(r.u_star);
  r.lp_solves = solver.solves();
  r.lp_pivots = solver.pivots();
  r.max_kkt_residual = solver.max_kkt();
  return r;
}

}  // namespace

DcaResult solve_l1(const DiscreteProblem& dp, const DcaConfig& cfg) {
  cfg.validate();
  SubproblemSolver solver(dp, cfg);
  const LpSolution sol = solver.solve(Vector::Ones(dp.num_vars()), 0);
  DcaResult r = finish(dp, cfg, sol.z, solver);
  r.cost_history = {sol.z.sum()};
  r.feas_history = {r.feas_residual};
  r.stop = StopReason::kStepStall;
  return r;
}

DcaResult run_dca(const DiscreteProblem& dp, const Penalty& pen, const DcaConfig& cfg) {
  cfg.validate();
  const AssumptionReport report = validate_assumption(pen);
  if (!report.passed) {
    throw Error(ErrorCode::kAssumption,
                pen.label() + " violates the assumptions on phi");
  }

  SubproblemSolver solver(dp, cfg);
  const Eigen::Index q = dp.num_vars();
  Vector z = Vector::Zero(q);
  std::vector<double> history;
  std::vector<double> feas;
  bool have_feasible = false;
  if (cfg.warm_start == WarmStart::kL1) {
    z = solver.solve(Vector::Ones(q), 0).z;
    history.push_back(cost_jd(pen, z, cfg.lp_tol));
    have_feasible = true;
  }

  int iterations = 0;
  StopReason stop = StopReason::kMaxIter;
  Vector c(q);
  while (iterations < cfg.max_iter) {
    for (Eigen::Index i = 0; i < q; ++i) {
      c(i) = 1.0 - pen.phi_subgradient(std::clamp(z(i), 0.0, 1.0), cfg.lp_epsilon);
    }
    const Vector next = solver.solve(c, iterations + 1).z;
    ++iterations;
    const double cost = cost_jd(pen, next, cfg.lp_tol);
    feas.push_back(solver.residual(next));

    bool done = false;
    if (have_feasible && std::abs(cost - history.back()) <= cfg.cost_tol) {
      stop = StopReason::kCostStall;
      done = true;
    } else if ((next - z).lpNorm<Eigen::Infinity>() <= cfg.step_tol) {
      stop = StopReason::kStepStall;
      done = true;
    }
    history.push_back(cost);
    z = next;
    have_feasible = true;
    if (done) break;
  }

  DcaResult r = finish(dp, cfg, z, solver);
  r.cost_history = std::move(history);
  r.feas_history = std::move(feas);
  r.iterations = iterations;
  r.stop = stop;
  return r;
}

}  // namespace handsoff
