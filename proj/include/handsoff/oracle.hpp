#pragma once

#include <vector>

#include "handsoff/dca.hpp"
#include "handsoff/system.hpp"

namespace handsoff {

struct CertificateTolerances {
  double value_tol = 1e-3;
  int fractional_per_edge = 2;
  double l0_tol = 0.01;
  double dblint_tol = 0.05;
  double terminal_tol = 1e-6;
  double theta = 1e-6;  // support threshold for l0 and edge detection

  /// Defaults for the N = 200 grid.
  static CertificateTolerances coarse();
};

struct CertificateReport {
  double value_deviation = 0.0;  // worst non-excused distance to {0, 1}
  int fractional_samples = 0;    // samples farther than value_tol from {0, 1}
  int excused_samples = 0;       // fractional samples sitting on support edges
  int support_intervals = 0;
  double l0_measured = 0.0;
  double l0_expected = 0.0;  // -xi_2
  double dblint_measured = 0.0;
  double dblint_expected = 0.0;  // -xi_1 - xi_2 T
  double terminal_norm = 0.0;
  bool passed = false;
};

/// Optimality conditions for the double integrator x1' = x2, x2' = u with
/// x0 = (xi1, xi2): u(t) in {0, 1} almost everywhere, ||u||_L0 = -xi2 and
/// int_0^T int_0^theta u = -xi1 - xi2 T. The double integral is a left
/// Riemann sum; the terminal norm comes from an exact ZOH simulation.
/// Up to fractional_per_edge fractional samples adjacent to each support
/// edge are tolerated.
CertificateReport double_integrator_certificate(const ControlSignal& u,
                                                const Vector& x0, double T,
                                                const CertificateTolerances& tols = {});

inline constexpr int kBruteForceMaxSamples = 16;

struct BruteForceResult {
  bool found = false;
  double min_l0 = 0.0;
  std::vector<ControlSignal> minimizers;
  long long feasible_points = 0;
};

/// Exhaustive search over u_d in {-1, 0, 1}^{mN} for the sparsest grid
/// signal with ||Phi split(u) + zeta||_inf <= eps. Throws a size error when
/// mN exceeds kBruteForceMaxSamples.
BruteForceResult brute_force_l0(const DiscreteProblem& dp, double eps = 1e-8);

/// Builds x0 = -Ad^{-N} Phi split(planted) so the planted grid signal
/// steers x0 exactly to the origin.
ControlProblem make_exact_instance(const LinearSystem& system, double T, int N,
                                   const ControlSignal& planted);

}  // namespace handsoff
