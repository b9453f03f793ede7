#include "handsoff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "handsoff/error.hpp"

namespace handsoff {

CertificateTolerances CertificateTolerances::coarse() {
  CertificateTolerances t;
  t.l0_tol = 0.05;
  t.dblint_tol = 0.1;
  return t;
}

CertificateReport double_integrator_certificate(const ControlSignal& u,
                                                const Vector& x0, double T,
                                                const CertificateTolerances& tols) {
  if (x0.size() != 2 || u.m() != 1) {
    throw Error(ErrorCode::kDimension,
                "certificate expects a scalar-input double integrator (n = 2, m = 1)");
  }
  const int N = u.N();
  if (N < 1 || std::abs(N * u.delta - T) > 1e-9 * std::max(1.0, T)) {
    throw Error(ErrorCode::kDimension, "control grid does not cover [0, T]");
  }
  const auto samples = u.samples.col(0);

  CertificateReport rep;
  const double xi1 = x0(0);
  const double xi2 = x0(1);
  rep.l0_expected = -xi2;
  rep.dblint_expected = -xi1 - xi2 * T;
  rep.l0_measured = l0_measure(u, tols.theta);

  // Support intervals and their edges.
  std::vector<int> edges;
  bool inside = false;
  for (int k = 0; k < N; ++k) {
    const bool on = std::abs(samples(k)) > tols.theta;
    if (on && !inside) {
      ++rep.support_intervals;
      edges.push_back(k);
    }
    if (!on && inside) edges.push_back(k - 1);
    inside = on;
  }
  if (inside) edges.push_back(N - 1);

  std::vector<int> excused_at_edge(edges.size(), 0);
  for (int k = 0; k < N; ++k) {
    const double x = samples(k);
    const double dist = std::min(std::abs(x), std::abs(1.0 - x));
    if (dist <= tols.value_tol) continue;
    ++rep.fractional_samples;
    bool excused = false;
    if (x > 0.0 && x < 1.0) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (std::abs(edges[e] - k) < tols.fractional_per_edge &&
            excused_at_edge[e] < tols.fractional_per_edge) {
          ++excused_at_edge[e];
          excused = true;
          break;
        }
      }
    }
    if (excused) {
      ++rep.excused_samples;
    } else {
      rep.value_deviation = std::max(rep.value_deviation, dist);
    }
  }

  // Left Riemann sum of int_0^T int_0^theta u: delta^2 sum_k sum_{i<k} u[i].
  double inner = 0.0;
  double outer = 0.0;
  for (int k = 0; k < N; ++k) {
    outer += inner;
    inner += samples(k);
  }
  rep.dblint_measured = u.delta * u.delta * outer;

  const ControlProblem problem(LinearSystem::double_integrator(), x0, T);
  const DiscreteProblem dp = build_discrete(problem, N);
  const SplitControl sc = split_control(u);
  rep.terminal_norm = simulate(dp, x0, sc.z).back().lpNorm<Eigen::Infinity>();

  rep.passed = rep.value_deviation <= tols.value_tol &&
               std::abs(rep.l0_measured - rep.l0_expected) <= tols.l0_tol &&
               std::abs(rep.dblint_measured - rep.dblint_expected) <= tols.dblint_tol &&
               rep.terminal_norm <= tols.terminal_tol;
  return rep;
}

namespace {

struct Enumerator {
  const DiscreteProblem& dp;
  double eps;
  std::vector<Vector> plus_cols;  // Phi block for +1 at sample (k, j)
  std::vector<int> choice;
  BruteForceResult result;
  int best = -1;

  void visit(std::size_t idx, const Vector& partial, int nonzeros) {
    if (best >= 0 && nonzeros > best) return;
    if (idx == plus_cols.size()) {
      if ((partial + dp.zeta).lpNorm<Eigen::Infinity>() > eps) return;
      ++result.feasible_points;
      if (best < 0 || nonzeros < best) {
        best = nonzeros;
        result.minimizers.clear();
      }
      ControlSignal u;
      u.delta = dp.delta;
      u.samples.resize(dp.N, dp.m);
      for (std::size_t i = 0; i < choice.size(); ++i) {
        u.samples(static_cast<Eigen::Index>(i) / dp.m,
                  static_cast<Eigen::Index>(i) % dp.m) = choice[i];
      }
      result.minimizers.push_back(std::move(u));
      return;
    }
    for (int value : {0, 1, -1}) {
      choice[idx] = value;
      if (value == 0) {
        visit(idx + 1, partial, nonzeros);
      } else {
        visit(idx + 1, partial + value * plus_cols[idx], nonzeros + 1);
      }
    }
    choice[idx] = 0;
  }
};

}  // namespace

BruteForceResult brute_force_l0(const DiscreteProblem& dp, double eps) {
  const long long samples = static_cast<long long>(dp.m) * dp.N;
  if (samples > kBruteForceMaxSamples) {
    throw Error(ErrorCode::kSize,
                "brute-force search needs m*N <= " + std::to_string(kBruteForceMaxSamples) +
                    ", got " + std::to_string(samples));
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::kDomain, "eps must be positive");

  Enumerator en{dp, eps, {}, std::vector<int>(static_cast<std::size_t>(samples), 0), {}, -1};
  en.plus_cols.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < dp.N; ++k) {
    for (Eigen::Index j = 0; j < dp.m; ++j) {
      // v and w columns are negatives of each other, so +1 uses v and -1 uses w.
      en.plus_cols.push_back(dp.Phi.col(2 * dp.m * k + j));
    }
  }
  en.visit(0, Vector::Zero(dp.n), 0);
  en.result.found = en.best >= 0;
  if (en.result.found) en.result.min_l0 = dp.delta * en.best;
  return std::move(en.result);
}

ControlProblem make_exact_instance(const LinearSystem& system, double T, int N,
                                   const ControlSignal& planted) {
  if (planted.N() != N || planted.m() != system.m()) {
    throw Error(ErrorCode::kDimension, "planted signal must be N x m");
  }
  const ControlProblem origin(system, Vector::Zero(system.n()), T);
  const DiscreteProblem dp = build_discrete(origin, N);
  SplitControl sc = split_control(planted);
  Matrix adn = Matrix::Identity(dp.n, dp.n);
  for (int k = 0; k < N; ++k) adn = dp.Ad * adn;
  const Vector x0 = adn.partialPivLu().solve(-(dp.Phi * sc.z));
  return ControlProblem(system, x0, T);
}

}  // namespace handsoff
