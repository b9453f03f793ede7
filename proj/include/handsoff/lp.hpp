#pragma once

#include "handsoff/linalg.hpp"

namespace handsoff {

inline constexpr double kDefaultLpTol = 1e-9;

/// min c'z  s.t.  Aeq z = beq,  0 <= z <= 1.
struct LpProblem {
  Vector c;
  Matrix Aeq;
  Vector beq;
};

enum class LpStatus { kOptimal, kInfeasible, kNumericalFailure };

const char* to_string(LpStatus status);

struct LpSolution {
  Vector z;
  Vector duals;  // equality multipliers y with reduced costs c - Aeq'y
  double objective = 0.0;
  LpStatus status = LpStatus::kNumericalFailure;
  double eq_residual = 0.0;
  double kkt_residual = 0.0;
  double phase1_objective = 0.0;  // minimal sum of artificial slacks
  int iterations = 0;
};

/// Bounded-variable revised simplex. Phase 1 drives artificial slacks to
/// zero; phase 2 prices with Dantzig's rule and falls back to Bland's rule
/// after 3q consecutive degenerate pivots. Returns a vertex.
LpSolution solve_lp(const LpProblem& problem, double tol = kDefaultLpTol);

/// Largest violation among: equality residual, box violation, and the sign
/// conditions on reduced costs c - Aeq'y (>= -tol at the lower bound,
/// <= tol at the upper bound, ~0 strictly inside).
double kkt_residual(const LpProblem& problem, const Vector& z,
                    const Vector& duals, double tol = kDefaultLpTol);

}  // namespace handsoff
