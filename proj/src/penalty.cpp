#include "handsoff/penalty.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "handsoff/error.hpp"

namespace handsoff {

const char* to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kLp:
      return "lp";
    case PenaltyKind::kMcp:
      return "mcp";
    case PenaltyKind::kScad:
      return "scad";
    case PenaltyKind::kLsp:
      return "lsp";
    case PenaltyKind::kCappedL1:
      return "capped_l1";
    case PenaltyKind::kL1L2:
      return "l1l2";
  }
  return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  for (auto kind : {PenaltyKind::kLp, PenaltyKind::kMcp, PenaltyKind::kScad,
                    PenaltyKind::kLsp, PenaltyKind::kCappedL1, PenaltyKind::kL1L2}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::kParameter,
              "unknown penalty kind '" + std::string(name) +
                  "' (expected lp, mcp, scad, lsp, capped_l1 or l1l2)");
}

namespace {

void require(bool ok, PenaltyKind kind, const char* range) {
  if (!ok) {
    throw Error(ErrorCode::kParameter,
                std::string(to_string(kind)) + " requires " + range);
  }
}

void check_domain(double u, double hi) {
  if (!std::isfinite(u) || std::abs(u) > hi) {
    throw Error(ErrorCode::kDomain, "penalty argument outside [-1, 1]");
  }
}

}  // namespace

Penalty Penalty::make(PenaltyKind kind, double lambda, double alpha, double p) {
  require(std::isfinite(lambda) && std::isfinite(alpha) && std::isfinite(p), kind,
          "finite parameters");
  switch (kind) {
    case PenaltyKind::kLp:
      require(lambda > 0.0, kind, "lambda > 0");
      require(p > 0.0 && p < 1.0, kind, "0 < p < 1");
      break;
    case PenaltyKind::kMcp:
      require(lambda > 0.0, kind, "lambda > 0");
      require(alpha > 0.0, kind, "alpha > 0");
      break;
    case PenaltyKind::kScad:
      require(lambda > 0.0 && lambda < 1.0, kind, "lambda in (0, 1)");
      require(alpha > 1.0, kind, "alpha > 1");
      break;
    case PenaltyKind::kLsp:
      require(lambda > 0.0, kind, "lambda > 0");
      require(alpha > 0.0, kind, "alpha > 0");
      break;
    case PenaltyKind::kCappedL1:
      require(lambda > 0.0, kind, "lambda > 0");
      require(alpha > 0.0 && alpha <= 1.0, kind, "alpha in (0, 1)");
      break;
    case PenaltyKind::kL1L2:
      require(lambda > 0.0 && lambda <= 1.0, kind, "lambda in (0, 1)");
      break;
  }
  return Penalty(kind, lambda, alpha, p);
}

std::string Penalty::label() const {
  char buf[128];
  switch (kind_) {
    case PenaltyKind::kLp:
      std::snprintf(buf, sizeof buf, "lp(p=%g,lambda=%g)", p_, lambda_);
      break;
    case PenaltyKind::kL1L2:
      std::snprintf(buf, sizeof buf, "l1l2(lambda=%g)", lambda_);
      break;
    default:
      std::snprintf(buf, sizeof buf, "%s(lambda=%g,alpha=%g)", to_string(kind_),
                    lambda_, alpha_);
      break;
  }
  return buf;
}

double Penalty::psi(double u) const {
  check_domain(u, 1.0);
  const double a = std::abs(u);
  switch (kind_) {
    case PenaltyKind::kLp:
      return lambda_ * std::pow(a, p_);
    case PenaltyKind::kMcp:
      if (a <= alpha_ * lambda_) return lambda_ * a - a * a / (2.0 * alpha_);
      return alpha_ * lambda_ * lambda_ / 2.0;
    case PenaltyKind::kScad:
      if (a <= lambda_) return lambda_ * a;
      if (a <= alpha_ * lambda_) {
        return -(a * a - 2.0 * alpha_ * lambda_ * a + lambda_ * lambda_) /
               (2.0 * (alpha_ - 1.0));
      }
      return (alpha_ + 1.0) * lambda_ * lambda_ / 2.0;
    case PenaltyKind::kLsp:
      return lambda_ * std::log1p(a / alpha_);
    case PenaltyKind::kCappedL1:
      return lambda_ * std::min(a, alpha_);
    case PenaltyKind::kL1L2:
      return a - lambda_ * a * a;
  }
  return 0.0;
}

double Penalty::phi(double u) const { return std::abs(u) - psi(u); }

double Penalty::phi_subgradient(double u, double eps) const {
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) {
    throw Error(ErrorCode::kDomain, "subgradient argument outside [0, 1]");
  }
  switch (kind_) {
    case PenaltyKind::kLp:
      if (!(eps > 0.0)) throw Error(ErrorCode::kDomain, "lp clamp must be positive");
      return 1.0 - lambda_ * p_ * std::pow(std::max(u, eps), p_ - 1.0);
    case PenaltyKind::kMcp:
      if (u <= alpha_ * lambda_) return 1.0 - lambda_ + u / alpha_;
      return 1.0;
    case PenaltyKind::kScad:
      if (u <= lambda_) return 1.0 - lambda_;
      if (u <= alpha_ * lambda_) return 1.0 + (u - alpha_ * lambda_) / (alpha_ - 1.0);
      return 1.0;
    case PenaltyKind::kLsp:
      return 1.0 - lambda_ / (alpha_ + u);
    case PenaltyKind::kCappedL1:
      return u <= alpha_ ? 1.0 - lambda_ : 1.0;
    case PenaltyKind::kL1L2:
      return 2.0 * lambda_ * u;
  }
  return 0.0;
}

std::vector<double> Penalty::breakpoints() const {
  std::vector<double> out;
  auto add = [&](double x) {
    if (x > 0.0 && x < 1.0) out.push_back(x);
  };
  switch (kind_) {
    case PenaltyKind::kMcp:
      add(alpha_ * lambda_);
      break;
    case PenaltyKind::kScad:
      add(lambda_);
      add(alpha_ * lambda_);
      break;
    case PenaltyKind::kCappedL1:
      add(alpha_);
      break;
    default:
      break;
  }
  return out;
}

double Penalty::equivalence_constant() const {
  const double c = 1.0 - phi(1.0);
  if (!(c > 0.0)) {
    throw Error(ErrorCode::kAssumption,
                label() + " gives phi(1) >= 1; the equivalence constant must be positive");
  }
  return c;
}

Penalty parse_penalty_spec(std::string_view spec) {
  std::istringstream in{std::string(spec)};
  std::string token;
  if (!(in >> token)) throw Error(ErrorCode::kParameter, "empty penalty spec");
  const PenaltyKind kind = parse_penalty_kind(token);
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.0;
  double p = 0.0;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParameter, "expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string text = token.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kParameter, "invalid number for " + key + ": '" + text + "'");
    }
    if (key == "lambda") {
      lambda = value;
    } else if (key == "alpha") {
      alpha = value;
    } else if (key == "p") {
      p = value;
    } else {
      throw Error(ErrorCode::kParameter, "unknown penalty field '" + key + "'");
    }
  }
  if (std::isnan(lambda)) throw Error(ErrorCode::kParameter, "penalty spec needs lambda");
  return Penalty::make(kind, lambda, alpha, p);
}

const char* to_string(AssumptionTag tag) {
  switch (tag) {
    case AssumptionTag::kA1:
      return "A1";
    case AssumptionTag::kA2:
      return "A2";
    case AssumptionTag::kA3:
      return "A3";
    case AssumptionTag::kA4:
      return "A4";
  }
  return "?";
}

AssumptionReport validate_assumption(const Penalty& pen, int grid_size, double margin) {
  if (grid_size < 100) {
    throw Error(ErrorCode::kDomain, "assumption grid needs at least 100 points");
  }
  AssumptionReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  bool a2_ok = true;
  bool a3_ok = pen.phi(0.0) == 0.0;
  if (!a3_ok) {
    report.worst_margin = -std::abs(pen.phi(0.0));
    report.witness_u = 0.0;
  }

  const double phi1 = pen.phi(1.0);
  auto track = [&](double slack, double u) {
    if (slack < report.worst_margin) {
      report.worst_margin = slack;
      report.witness_u = u;
    }
  };
  track(1.0 - phi1, 1.0);
  if (!(phi1 < 1.0 - margin)) a3_ok = false;

  for (int i = 1; i <= grid_size; ++i) {
    const double u = static_cast<double>(i) / grid_size;
    const double plus = pen.phi(u);
    const double minus = pen.phi(-u);
    if (std::abs(plus - minus) > margin) {
      a2_ok = false;
      track(-std::abs(plus - minus), u);
    }
    if (i < grid_size) {
      const double slack = phi1 * u - plus;
      track(slack, u);
      if (!(plus < phi1 * u - margin)) a3_ok = false;
    }
  }
  if (!a2_ok) report.violated.push_back(AssumptionTag::kA2);
  if (!a3_ok) report.violated.push_back(AssumptionTag::kA3);
  report.passed = report.violated.empty();
  return report;
}

}  // namespace handsoff
