#pragma once

#include <vector>

#include "handsoff/linalg.hpp"

namespace handsoff {

inline constexpr double kDefaultFeasibilityTol = 1e-8;

/// Continuous-time plant  x' = A x + B u.
class LinearSystem {
 public:
  LinearSystem(Matrix A, Matrix B);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  Eigen::Index n() const { return A_.rows(); }
  Eigen::Index m() const { return B_.cols(); }

  static LinearSystem double_integrator();
  bool is_double_integrator() const;

 private:
  Matrix A_;
  Matrix B_;
};

/// Steer x0 to the origin in time T with |u_j(t)| <= 1.
struct ControlProblem {
  ControlProblem(LinearSystem system, Vector x0, double T);

  LinearSystem system;
  Vector x0;
  double T;
};

/// Zero-order-hold transcription over N equal subintervals. The decision
/// vector z stacks [v[0]; w[0]; ...; v[N-1]; w[N-1]], each block of length
/// m, and the terminal constraint reads  zeta + Phi z = 0.
struct DiscreteProblem {
  double delta = 0.0;
  int N = 0;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Matrix Ad;    // e^{A delta}
  Matrix Bd;    // n x 2m, columns ordered [B, -B]
  Matrix Phi;   // n x 2mN, block k is Ad^{N-1-k} Bd
  Vector zeta;  // Ad^N x0
  Vector x0;

  Eigen::Index num_vars() const { return 2 * m * N; }
};

DiscreteProblem build_discrete(const ControlProblem& problem, int N);

/// State sequence x[0..N] under the stacked split control z.
std::vector<Vector> simulate(const DiscreteProblem& dp, const Vector& x0,
                             const Vector& z);

struct FeasibilityResult {
  bool feasible = false;
  Vector witness;
  double phase1_value = 0.0;
};

/// Phase-1 LP over the box; feasible iff the minimal slack is <= tol.
FeasibilityResult check_feasible(const DiscreteProblem& dp,
                                 double tol = kDefaultFeasibilityTol);

}  // namespace handsoff
