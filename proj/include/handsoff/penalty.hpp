#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace handsoff {

enum class PenaltyKind { kLp, kMcp, kScad, kLsp, kCappedL1, kL1L2 };

/// Configuration keyword: "lp", "mcp", "scad", "lsp", "capped_l1", "l1l2".
const char* to_string(PenaltyKind kind);
PenaltyKind parse_penalty_kind(std::string_view name);

inline constexpr double kDefaultLpEpsilon = 1e-8;

/// Scalar sparsity penalty psi applied identically to every input channel,
/// and its gap function phi(u) = |u| - psi(u).
///
/// Admitted parameter ranges:
///   lp         lambda > 0, 0 < p < 1
///   mcp        lambda > 0, alpha > 0
///   scad       0 < lambda < 1, alpha > 1
///   lsp        lambda > 0, alpha > 0
///   capped_l1  lambda > 0, 0 < alpha <= 1
///   l1l2       0 < lambda <= 1
/// The closed upper ends for capped_l1 and l1l2 are accepted so that the
/// boundary cases reach validate_assumption, which rejects them.
class Penalty {
 public:
  /// Throws a parameter error naming the violated range.
  static Penalty make(PenaltyKind kind, double lambda, double alpha = 0.0,
                      double p = 0.0);

  PenaltyKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double p() const { return p_; }

  /// Short label such as "mcp(lambda=1,alpha=0.5)".
  std::string label() const;

  double psi(double u) const;
  double phi(double u) const;

  /// Deterministic element of the subdifferential of phi on [0, 1]: the
  /// derivative at smooth points, the left derivative at kinks, the right
  /// derivative at 0. For lp the derivative is evaluated at max(u, eps).
  double phi_subgradient(double u, double eps = kDefaultLpEpsilon) const;

  /// Kink locations of phi inside (0, 1).
  std::vector<double> breakpoints() const;

  /// c = 1 - phi(1) = psi(1). Throws an assumption error if c <= 0.
  double equivalence_constant() const;

 private:
  Penalty(PenaltyKind kind, double lambda, double alpha, double p)
      : kind_(kind), lambda_(lambda), alpha_(alpha), p_(p) {}

  PenaltyKind kind_;
  double lambda_;
  double alpha_;
  double p_;
};

/// Parses an inline spec such as "scad lambda=0.25 alpha=3".
Penalty parse_penalty_spec(std::string_view spec);

enum class AssumptionTag { kA1, kA2, kA3, kA4 };
const char* to_string(AssumptionTag tag);

struct AssumptionReport {
  bool passed = true;
  std::vector<AssumptionTag> violated;
  double worst_margin = 0.0;  // smallest slack among the strict inequalities
  double witness_u = 0.0;     // where that slack occurs
  bool grid_verified = true;  // strict inequalities were checked on a grid
};

inline constexpr double kDefaultAssumptionMargin = 1e-12;

/// Grid check of the assumptions on phi. Separability and equal terminal
/// values hold structurally (one penalty shared by all channels). Symmetry
/// and the bound phi(u) < phi(1)|u|, phi(1) < 1 are checked on
/// {i / grid_size}. Violations are reported, never thrown.
AssumptionReport validate_assumption(const Penalty& pen, int grid_size = 10000,
                                     double margin = kDefaultAssumptionMargin);

}  // namespace handsoff
