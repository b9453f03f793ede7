#include "handsoff/system.hpp"

#include <cmath>
#include <string>

#include "handsoff/error.hpp"
#include "handsoff/lp.hpp"

namespace handsoff {

LinearSystem::LinearSystem(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() < 1 || A_.rows() != A_.cols()) {
    throw Error(ErrorCode::kDimension, "A must be a non-empty square matrix");
  }
  if (B_.cols() < 1 || B_.rows() != A_.rows()) {
    throw Error(ErrorCode::kDimension, "B must have n rows and at least one column");
  }
  if (!A_.allFinite() || !B_.allFinite()) {
    throw Error(ErrorCode::kDomain, "system matrices must be finite");
  }
}

LinearSystem LinearSystem::double_integrator() {
  Matrix A(2, 2);
  A << 0.0, 1.0, 0.0, 0.0;
  Matrix B(2, 1);
  B << 0.0, 1.0;
  return LinearSystem(A, B);
}

bool LinearSystem::is_double_integrator() const {
  const LinearSystem ref = double_integrator();
  return A_.rows() == 2 && B_.cols() == 1 && A_ == ref.A() && B_ == ref.B();
}

ControlProblem::ControlProblem(LinearSystem sys, Vector x0_in, double horizon)
    : system(std::move(sys)), x0(std::move(x0_in)), T(horizon) {
  if (x0.size() != system.n()) {
    throw Error(ErrorCode::kDimension,
                "x0 has length " + std::to_string(x0.size()) + ", expected " +
                    std::to_string(system.n()));
  }
  if (!x0.allFinite()) throw Error(ErrorCode::kDomain, "x0 must be finite");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorCode::kDomain, "horizon T must be positive and finite");
  }
}

DiscreteProblem build_discrete(const ControlProblem& problem, int N) {
  if (N < 1) throw Error(ErrorCode::kDomain, "N must be at least 1");
  const auto& sys = problem.system;
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();

  DiscreteProblem dp;
  dp.N = N;
  dp.n = n;
  dp.m = m;
  dp.delta = problem.T / N;
  dp.x0 = problem.x0;

  Matrix bext(n, 2 * m);
  bext << sys.B(), -sys.B();
  auto [Ad, Bd] = zoh_discretize(sys.A(), bext, dp.delta);
  dp.Ad = std::move(Ad);
  dp.Bd = std::move(Bd);

  dp.Phi.resize(n, 2 * m * N);
  Matrix block = dp.Bd;
  for (int k = N - 1; k >= 0; --k) {
    dp.Phi.middleCols(2 * m * k, 2 * m) = block;
    if (k > 0) block = dp.Ad * block;
  }
  Vector zeta = problem.x0;
  for (int k = 0; k < N; ++k) zeta = dp.Ad * zeta;
  dp.zeta = std::move(zeta);
  return dp;
}

std::vector<Vector> simulate(const DiscreteProblem& dp, const Vector& x0,
                             const Vector& z) {
  if (z.size() != dp.num_vars()) {
    throw Error(ErrorCode::kDimension,
                "control vector has length " + std::to_string(z.size()) +
                    ", expected " + std::to_string(dp.num_vars()));
  }
  if (x0.size() != dp.n) {
    throw Error(ErrorCode::kDimension, "initial state has the wrong length");
  }
  std::vector<Vector> states;
  states.reserve(static_cast<std::size_t>(dp.N) + 1);
  states.push_back(x0);
  const Eigen::Index block = 2 * dp.m;
  for (int k = 0; k < dp.N; ++k) {
    states.push_back(dp.Ad * states.back() + dp.Bd * z.segment(block * k, block));
  }
  return states;
}

FeasibilityResult check_feasible(const DiscreteProblem& dp, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kDomain, "tolerance must be positive");
  LpProblem lp{Vector::Zero(dp.num_vars()), dp.Phi, -dp.zeta};
  const LpSolution sol = solve_lp(lp, std::min(tol, kDefaultLpTol));
  FeasibilityResult out;
  out.phase1_value = sol.phase1_objective;
  if (sol.status == LpStatus::kNumericalFailure) {
    throw Error(ErrorCode::kNumerical,
                "phase-1 LP failed; equality residual " +
                    std::to_string(sol.eq_residual));
  }
  out.feasible = sol.status == LpStatus::kOptimal && sol.phase1_objective <= tol;
  if (out.feasible) out.witness = sol.z;
  return out;
}

}  // namespace handsoff
