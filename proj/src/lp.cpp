#include "handsoff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "handsoff/error.hpp"

namespace handsoff {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;

enum class PhaseOutcome { kOptimal, kFailure };

// Working state of the bounded simplex over [structural | artificial]
// columns. Rows with negative right-hand side are negated so the all-
// artificial basis is feasible at the start.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& p, double tol)
      : rows_(p.Aeq.rows()),
        q_(p.Aeq.cols()),
        total_(q_ + rows_),
        tol_(tol),
        row_sign_(rows_),
        a_(rows_, total_),
        b_(rows_),
        lower_(total_),
        upper_(total_),
        x_(total_),
        basis_(static_cast<std::size_t>(rows_)),
        basic_pos_(static_cast<std::size_t>(total_), -1) {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      row_sign_(i) = p.beq(i) < 0.0 ? -1.0 : 1.0;
    }
    a_.leftCols(q_) = row_sign_.asDiagonal() * p.Aeq;
    a_.rightCols(rows_).setIdentity();
    b_ = row_sign_.cwiseProduct(p.beq);
    for (Eigen::Index j = 0; j < q_; ++j) {
      lower_(j) = 0.0;
      upper_(j) = 1.0;
      x_(j) = 0.0;
    }
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index j = q_ + i;
      lower_(j) = 0.0;
      upper_(j) = kInf;
      x_(j) = b_(i);
      set_basic(static_cast<std::size_t>(i), j);
    }
  }

  PhaseOutcome run_phase(const Vector& cost) {
    int degenerate_streak = 0;
    const int bland_after = static_cast<int>(3 * q_);
    const long max_iter = 50L * (total_ + 10);
    for (long it = 0; it < max_iter; ++it) {
      if (!refactor()) return PhaseOutcome::kFailure;
      const bool bland = degenerate_streak >= bland_after;

      Vector cb(rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
      const Vector y = binv_.transpose() * cb;

      Eigen::Index entering = -1;
      double best = 0.0;
      double dir = 0.0;
      const double dtol = 0.1 * tol_;
      for (Eigen::Index j = 0; j < total_; ++j) {
        if (basic_pos_[j] >= 0 || upper_(j) <= lower_(j)) continue;
        const double d = cost(j) - a_.col(j).dot(y);
        const bool at_lower = x_(j) <= lower_(j);
        double gain = 0.0;
        if (at_lower && d < -dtol) gain = -d;
        if (!at_lower && d > dtol) gain = d;
        if (gain <= 0.0) continue;
        if (bland) {
          entering = j;
          dir = at_lower ? 1.0 : -1.0;
          break;
        }
        if (gain > best) {
          best = gain;
          entering = j;
          dir = at_lower ? 1.0 : -1.0;
        }
      }
      if (entering < 0) return PhaseOutcome::kOptimal;
      ++iterations_;

      const Vector alpha = binv_ * a_.col(entering);
      double theta = upper_(entering) - lower_(entering);
      Eigen::Index leave = -1;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double rate = dir * alpha(i);
        const Eigen::Index var = basis_[i];
        double step = kInf;
        if (rate > kPivotTol) {
          step = (x_(var) - lower_(var)) / rate;
        } else if (rate < -kPivotTol && std::isfinite(upper_(var))) {
          step = (upper_(var) - x_(var)) / -rate;
        } else {
          continue;
        }
        step = std::max(step, 0.0);
        bool take = false;
        if (step < theta - kDegenerateStep) {
          take = true;
        } else if (leave >= 0 && step <= theta + kDegenerateStep) {
          take = bland ? var < basis_[leave]
                       : std::abs(alpha(i)) > std::abs(alpha(leave));
        }
        if (take) {
          theta = step;
          leave = i;
        }
      }
      if (!std::isfinite(theta)) return PhaseOutcome::kFailure;

      if (leave < 0) {
        // Bound flip: the entering variable crosses its whole range.
        x_(entering) = dir > 0 ? upper_(entering) : lower_(entering);
      } else {
        const Eigen::Index out = basis_[leave];
        const bool to_lower = dir * alpha(leave) > 0.0;
        x_(out) = to_lower ? lower_(out) : upper_(out);
        basic_pos_[out] = -1;
        x_(entering) += dir * theta;
        set_basic(static_cast<std::size_t>(leave), entering);
      }
      degenerate_streak = theta <= kDegenerateStep ? degenerate_streak + 1 : 0;
    }
    return PhaseOutcome::kFailure;
  }

  double artificial_sum() const { return x_.tail(rows_).sum(); }

  // Pivots zero-valued artificials out of the basis where a structural
  // column can replace them, then pins every artificial to zero.
  bool expel_artificials() {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[r] < q_) continue;
      if (!refactor()) return false;
      const Vector row = binv_.row(r) * a_.leftCols(q_);
      Eigen::Index pick = -1;
      double mag = 1e-7;
      for (Eigen::Index j = 0; j < q_; ++j) {
        if (basic_pos_[j] >= 0) continue;
        if (std::abs(row(j)) > mag) {
          mag = std::abs(row(j));
          pick = j;
        }
      }
      if (pick < 0) continue;  // redundant row; artificial stays at zero
      const Eigen::Index out = basis_[r];
      basic_pos_[out] = -1;
      x_(out) = 0.0;
      set_basic(static_cast<std::size_t>(r), pick);
    }
    for (Eigen::Index i = 0; i < rows_; ++i) upper_(q_ + i) = 0.0;
    if (!refactor()) return false;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] >= q_) x_(basis_[i]) = 0.0;
    }
    return true;
  }

  Vector duals(const Vector& cost) const {
    Vector cb(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
    Matrix bt(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) bt.row(i) = a_.col(basis_[i]).transpose();
    Eigen::FullPivLU<Matrix> lu(bt);
    Vector y = lu.solve(cb);
    for (int pass = 0; pass < 2; ++pass) y += lu.solve(cb - bt * y);
    return row_sign_.cwiseProduct(y);
  }

  // Structural values; basic entries within tol of a bound are snapped.
  Vector structural() const {
    Vector z = x_.head(q_);
    for (Eigen::Index j = 0; j < q_; ++j) {
      if (basic_pos_[j] < 0) continue;
      if (std::abs(z(j)) <= tol_) z(j) = 0.0;
      if (std::abs(z(j) - 1.0) <= tol_) z(j) = 1.0;
    }
    return z;
  }

  bool refactor() {
    if (rows_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    Matrix bmat(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) bmat.col(i) = a_.col(basis_[i]);
    Eigen::FullPivLU<Matrix> lu(bmat);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    Vector rhs = b_;
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (basic_pos_[j] < 0 && x_(j) != 0.0) rhs -= a_.col(j) * x_(j);
    }
    const Vector xb = binv_ * rhs;
    for (Eigen::Index i = 0; i < rows_; ++i) x_(basis_[i]) = xb(i);
    return true;
  }

  Eigen::Index total() const { return total_; }
  Eigen::Index structurals() const { return q_; }
  int iterations() const { return iterations_; }

 private:
  void set_basic(std::size_t pos, Eigen::Index var) {
    basis_[pos] = var;
    basic_pos_[static_cast<std::size_t>(var)] = static_cast<int>(pos);
  }

  Eigen::Index rows_;
  Eigen::Index q_;
  Eigen::Index total_;
  double tol_;
  Vector row_sign_;
  Matrix a_;
  Vector b_;
  Vector lower_;
  Vector upper_;
  Vector x_;
  std::vector<Eigen::Index> basis_;
  std::vector<int> basic_pos_;
  Matrix binv_;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kDomain, "LP tolerance must be positive");
  }
  const Eigen::Index q = problem.Aeq.cols();
  if (problem.c.size() != q || problem.beq.size() != problem.Aeq.rows()) {
    throw Error(ErrorCode::kDimension, "LP data has inconsistent dimensions");
  }
  if (!problem.c.allFinite() || !problem.Aeq.allFinite() ||
      !problem.beq.allFinite()) {
    throw Error(ErrorCode::kDomain, "LP data must be finite");
  }

  LpSolution sol;
  BoundedSimplex simplex(problem, tol);
  const Eigen::Index total = simplex.total();

  Vector phase1_cost = Vector::Zero(total);
  phase1_cost.tail(total - q).setOnes();
  if (simplex.run_phase(phase1_cost) != PhaseOutcome::kOptimal) {
    sol.status = LpStatus::kNumericalFailure;
    sol.iterations = simplex.iterations();
    sol.z = simplex.structural();
    return sol;
  }
  sol.phase1_objective = std::max(simplex.artificial_sum(), 0.0);
  const double feas_tol = tol * (1.0 + problem.beq.lpNorm<Eigen::Infinity>());
  if (sol.phase1_objective > feas_tol) {
    sol.status = LpStatus::kInfeasible;
    sol.iterations = simplex.iterations();
    sol.z = simplex.structural();
    sol.eq_residual = (problem.Aeq * sol.z - problem.beq).lpNorm<Eigen::Infinity>();
    return sol;
  }

  Vector phase2_cost = Vector::Zero(total);
  phase2_cost.head(q) = problem.c;
  if (!simplex.expel_artificials() ||
      simplex.run_phase(phase2_cost) != PhaseOutcome::kOptimal ||
      !simplex.refactor()) {
    sol.status = LpStatus::kNumericalFailure;
    sol.iterations = simplex.iterations();
    sol.z = simplex.structural();
    return sol;
  }

  sol.z = simplex.structural();
  sol.duals = simplex.duals(phase2_cost);
  sol.iterations = simplex.iterations();
  sol.objective = problem.c.dot(sol.z);
  sol.eq_residual = problem.Aeq.rows() == 0
                        ? 0.0
                        : (problem.Aeq * sol.z - problem.beq).lpNorm<Eigen::Infinity>();
  sol.kkt_residual = kkt_residual(problem, sol.z, sol.duals, tol);
  sol.status = (sol.eq_residual <= tol && sol.kkt_residual <= tol)
                   ? LpStatus::kOptimal
                   : LpStatus::kNumericalFailure;
  return sol;
}

double kkt_residual(const LpProblem& problem, const Vector& z,
                    const Vector& duals, double tol) {
  if (z.size() != problem.Aeq.cols() || duals.size() != problem.Aeq.rows()) {
    throw Error(ErrorCode::kDimension, "KKT check has inconsistent dimensions");
  }
  double worst = 0.0;
  if (problem.Aeq.rows() > 0) {
    worst = (problem.Aeq * z - problem.beq).lpNorm<Eigen::Infinity>();
  }
  const Vector reduced = problem.c - problem.Aeq.transpose() * duals;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    worst = std::max({worst, -z(j), z(j) - 1.0});
    const double d = reduced(j);
    if (z(j) <= tol) {
      worst = std::max(worst, -d);
    } else if (z(j) >= 1.0 - tol) {
      worst = std::max(worst, d);
    } else {
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

}  // namespace handsoff
