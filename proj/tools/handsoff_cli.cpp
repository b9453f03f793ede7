// Command-line front end over the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "handsoff/handsoff.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 3;

// A config problem, reported with exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A library failure carrying its status.
struct ApiError : std::runtime_error {
  ApiError(hoc_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  hoc_status status;
};

int exit_code(hoc_status s) {
  switch (s) {
    case HOC_OK:
    case HOC_ERR_CONFIG:
    case HOC_ERR_INFEASIBLE:
    case HOC_ERR_NUMERICAL:
    case HOC_ERR_ASSUMPTION:
    case HOC_ERR_SIZE:
      return static_cast<int>(s);
    case HOC_ERR_INTERNAL:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

void check(hoc_status s, const std::string& context) {
  if (s != HOC_OK) throw ApiError(s, context + ": " + hoc_last_error());
}

struct PenaltyDeleter {
  void operator()(hoc_penalty* p) const { hoc_penalty_free(p); }
};
struct ProblemDeleter {
  void operator()(hoc_problem* p) const { hoc_problem_free(p); }
};
struct ResultDeleter {
  void operator()(hoc_result* p) const { hoc_result_free(p); }
};
using PenaltyPtr = std::unique_ptr<hoc_penalty, PenaltyDeleter>;
using ProblemPtr = std::unique_ptr<hoc_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<hoc_result, ResultDeleter>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- config ---------------------------------------------------------------

struct Options {
  std::string config;
  std::string output;
  std::string penalty;
  std::string warm_start;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  int n = 0;
  int m = 0;
  std::vector<double> A;  // row-major
  std::vector<double> B;
  std::vector<double> x0;
  double T = 0.0;
  int N = 0;
  std::vector<json> penalties;
  bool penalty_given = false;
  hoc_dca_config dca{};
  fs::path output_dir = ".";
  bool coarse_certificate = false;
  json planted;
  std::optional<double> oracle_eps;
  std::uint64_t seed = 0;
};

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError("field '" + field + "' must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
  return v.get<int>();
}

std::vector<double> matrix(const json& v, const std::string& field, int& rows, int& cols) {
  if (!v.is_array() || v.empty()) throw ConfigError("field '" + field + "' must be a nested array");
  rows = static_cast<int>(v.size());
  cols = -1;
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& row = v[i];
    if (!row.is_array()) throw ConfigError("field '" + field + "' must be a nested array");
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols || cols == 0) {
      throw ConfigError("field '" + field + "' is not rectangular");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out.push_back(number(row[j], field + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    }
  }
  return out;
}

hoc_warm_start parse_warm_start(const std::string& s) {
  if (s == "zero") return HOC_WARM_ZERO;
  if (s == "l1") return HOC_WARM_L1;
  throw ConfigError("warm start must be 'zero' or 'l1', got '" + s + "'");
}

void read_dca(const json& d, hoc_dca_config& cfg) {
  if (!d.is_object()) throw ConfigError("field 'dca' must be an object");
  for (const auto& [key, val] : d.items()) {
    const std::string f = "dca." + key;
    if (key == "cost_tol") cfg.cost_tol = number(val, f);
    else if (key == "step_tol") cfg.step_tol = number(val, f);
    else if (key == "max_iter") cfg.max_iter = integer(val, f);
    else if (key == "lp_tol") cfg.lp_tol = number(val, f);
    else if (key == "l0_threshold") cfg.l0_threshold = number(val, f);
    else if (key == "lp_epsilon") cfg.lp_epsilon = number(val, f);
    else if (key == "warm_start") {
      if (!val.is_string()) throw ConfigError("field 'dca.warm_start' must be a string");
      cfg.warm_start = parse_warm_start(val.get<std::string>());
    } else {
      throw ConfigError("unknown field '" + f + "'");
    }
  }
}

RunConfig load_config(const Options& opt, bool need_system) {
  RunConfig rc;
  hoc_dca_config_default(&rc.dca);
  json doc = json::object();
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw ConfigError("cannot read config '" + opt.config + "'");
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  } else if (need_system) {
    throw ConfigError("--config is required");
  }

  static const std::vector<std::string> known = {
      "system", "x0", "T", "N", "penalty", "penalties", "dca", "output_dir",
      "certificate", "planted", "oracle_eps", "seed"};
  for (const auto& [key, val] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown field '" + key + "'");
    }
  }

  if (need_system) {
    if (!doc.contains("system") || !doc["system"].is_object()) {
      throw ConfigError("field 'system' is required and must hold A and B");
    }
    const auto& sys = doc["system"];
    if (!sys.contains("A")) throw ConfigError("field 'system.A' is required");
    if (!sys.contains("B")) throw ConfigError("field 'system.B' is required");
    int ar = 0, ac = 0, br = 0, bc = 0;
    rc.A = matrix(sys["A"], "system.A", ar, ac);
    rc.B = matrix(sys["B"], "system.B", br, bc);
    if (ar != ac) throw ConfigError("field 'system.A' must be square");
    if (br != ar) throw ConfigError("field 'system.B' must have as many rows as A");
    rc.n = ar;
    rc.m = bc;
    if (!doc.contains("T")) throw ConfigError("field 'T' is required");
    rc.T = number(doc["T"], "T");
    if (!(rc.T > 0.0) || !std::isfinite(rc.T)) throw ConfigError("field 'T' must be positive");
    if (!doc.contains("N")) throw ConfigError("field 'N' is required");
    rc.N = integer(doc["N"], "N");
    if (rc.N < 1) throw ConfigError("field 'N' must be at least 1");
    if (doc.contains("x0")) {
      const auto& x = doc["x0"];
      if (!x.is_array()) throw ConfigError("field 'x0' must be an array");
      for (std::size_t i = 0; i < x.size(); ++i) {
        rc.x0.push_back(number(x[i], "x0[" + std::to_string(i) + "]"));
      }
      if (static_cast<int>(rc.x0.size()) != rc.n) {
        throw ConfigError("field 'x0' must have length " + std::to_string(rc.n));
      }
    }
  }

  for (const char* key : {"penalty", "penalties"}) {
    if (!doc.contains(key)) continue;
    rc.penalty_given = true;
    const auto& p = doc[key];
    if (p.is_array()) {
      for (const auto& e : p) rc.penalties.push_back(e);
    } else {
      rc.penalties.push_back(p);
    }
  }
  if (!opt.penalty.empty()) {
    rc.penalties = {json(opt.penalty)};
    rc.penalty_given = true;
  }

  if (doc.contains("dca")) read_dca(doc["dca"], rc.dca);
  if (!opt.warm_start.empty()) rc.dca.warm_start = parse_warm_start(opt.warm_start);

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("field 'output_dir' must be a string");
    rc.output_dir = doc["output_dir"].get<std::string>();
    if (rc.output_dir.is_relative() && !opt.config.empty()) {
      rc.output_dir = fs::path(opt.config).parent_path() / rc.output_dir;
    }
  }
  if (!opt.output.empty()) rc.output_dir = opt.output;

  if (doc.contains("certificate")) {
    const auto& c = doc["certificate"];
    if (!c.is_string() || (c != "fine" && c != "coarse")) {
      throw ConfigError("field 'certificate' must be 'fine' or 'coarse'");
    }
    rc.coarse_certificate = c == "coarse";
  }
  if (doc.contains("planted")) rc.planted = doc["planted"];
  if (doc.contains("oracle_eps")) rc.oracle_eps = number(doc["oracle_eps"], "oracle_eps");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("field 'seed' must be a nonnegative integer");
    rc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (opt.seed) rc.seed = *opt.seed;
  return rc;
}

PenaltyPtr make_penalty(const json& spec, const std::string& field) {
  hoc_penalty* raw = nullptr;
  hoc_status s;
  if (spec.is_string()) {
    s = hoc_penalty_parse(spec.get<std::string>().c_str(), &raw);
  } else if (spec.is_object()) {
    if (!spec.contains("kind") || !spec["kind"].is_string()) {
      throw ConfigError("field '" + field + ".kind' is required");
    }
    for (const auto& [key, val] : spec.items()) {
      if (key != "kind" && key != "lambda" && key != "alpha" && key != "p") {
        throw ConfigError("unknown field '" + field + "." + key + "'");
      }
    }
    auto get = [&](const char* k) {
      return spec.contains(k) ? number(spec[k], field + "." + k) : 0.0;
    };
    if (!spec.contains("lambda")) throw ConfigError("field '" + field + ".lambda' is required");
    s = hoc_penalty_create(spec["kind"].get<std::string>().c_str(), get("lambda"),
                           get("alpha"), get("p"), &raw);
  } else {
    throw ConfigError("field '" + field + "' must be a string or an object");
  }
  if (s != HOC_OK) throw ApiError(s, field + ": " + hoc_last_error());
  return PenaltyPtr(raw);
}

ProblemPtr make_problem(const RunConfig& rc, const std::vector<double>& x0) {
  hoc_problem* raw = nullptr;
  check(hoc_problem_create(rc.n, rc.m, rc.A.data(), rc.B.data(), x0.data(), rc.T, rc.N, &raw),
        "problem");
  return ProblemPtr(raw);
}

// ---- outputs --------------------------------------------------------------

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
}

std::string trajectory_csv(const hoc_result* res, double delta) {
  const double* u = nullptr;
  const double* x = nullptr;
  int N = 0, m = 0, rows = 0, n = 0;
  check(hoc_result_control(res, &u, &N, &m), "control");
  check(hoc_result_states(res, &x, &rows, &n), "states");
  std::string s = "t";
  for (int j = 1; j <= m; ++j) s += ",u_" + std::to_string(j);
  for (int i = 1; i <= n; ++i) s += ",x_" + std::to_string(i);
  s += "\n";
  for (int k = 0; k < rows; ++k) {
    s += fmt17(k * delta);
    for (int j = 0; j < m; ++j) {
      s += ",";
      if (k < N) s += fmt17(u[k * m + j]);
    }
    for (int i = 0; i < n; ++i) s += "," + fmt17(x[k * n + i]);
    s += "\n";
  }
  return s;
}

std::vector<double> history(const hoc_result* res, bool cost) {
  const double* data = nullptr;
  std::size_t len = 0;
  check(cost ? hoc_result_cost_history(res, &data, &len) : hoc_result_feas_history(res, &data, &len),
        "history");
  return std::vector<double>(data, data + len);
}

json summary_json(const hoc_result* res, const std::string& label) {
  hoc_result_summary sum{};
  check(hoc_result_summary_get(res, &sum), "summary");
  json j;
  j["penalty"] = label;
  j["iterations"] = sum.iterations;
  j["lp_solves"] = sum.lp_solves;
  j["lp_pivots"] = sum.lp_pivots;
  j["stop_reason"] = sum.stop_reason;
  j["cost_history"] = history(res, true);
  j["feas_history"] = history(res, false);
  j["l0"] = sum.l0;
  j["feas_residual"] = sum.feas_residual;
  j["bob_deviation"] = sum.bob_deviation;
  j["complementarity_violation"] = sum.complementarity_violation;
  j["max_kkt_residual"] = sum.max_kkt_residual;
  return j;
}

std::optional<hoc_certificate_report> certificate(const RunConfig& rc, const hoc_problem* prob,
                                                  const hoc_result* res) {
  if (!hoc_problem_is_double_integrator(prob)) return std::nullopt;
  hoc_certificate_tolerances tols;
  hoc_certificate_tolerances_default(&tols, rc.coarse_certificate ? 1 : 0);
  hoc_certificate_report rep{};
  check(hoc_double_integrator_certificate(prob, res, &tols, &rep), "certificate");
  return rep;
}

json certificate_json(const hoc_certificate_report& r) {
  return json{{"passed", r.passed != 0},
              {"value_deviation", r.value_deviation},
              {"fractional_samples", r.fractional_samples},
              {"excused_samples", r.excused_samples},
              {"support_intervals", r.support_intervals},
              {"l0_measured", r.l0_measured},
              {"l0_expected", r.l0_expected},
              {"dblint_measured", r.dblint_measured},
              {"dblint_expected", r.dblint_expected},
              {"terminal_norm", r.terminal_norm}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- commands -------------------------------------------------------------

int cmd_solve(const Options& opt) {
  const RunConfig rc = load_config(opt, true);
  if (rc.x0.empty()) throw ConfigError("field 'x0' is required");
  if (rc.penalties.size() != 1) throw ConfigError("field 'penalty' must name exactly one penalty");
  const auto pen = make_penalty(rc.penalties[0], "penalty");
  const auto prob = make_problem(rc, rc.x0);
  prepare_dir(rc.output_dir);

  const auto t0 = std::chrono::steady_clock::now();
  hoc_result* raw = nullptr;
  check(hoc_dca_run(prob.get(), pen.get(), &rc.dca, &raw), "dca");
  const ResultPtr res(raw);
  const double wall = seconds_since(t0);

  int n = 0, m = 0, N = 0;
  double delta = 0.0;
  check(hoc_problem_dims(prob.get(), &n, &m, &N, &delta), "dims");
  write_file(rc.output_dir / "trajectory.csv", trajectory_csv(res.get(), delta));
  json sum = summary_json(res.get(), hoc_penalty_label(pen.get()));
  if (auto cert = certificate(rc, prob.get(), res.get())) sum["certificate"] = certificate_json(*cert);
  sum["wall_time_s"] = wall;
  write_file(rc.output_dir / "summary.json", dump(sum));
  std::cout << "penalty " << hoc_penalty_label(pen.get()) << ": l0 " << fmt17(sum["l0"].get<double>())
            << ", iterations " << sum["iterations"] << ", lp_solves " << sum["lp_solves"] << "\n";
  return kExitOk;
}

struct CompareRow {
  std::string label;
  std::string file;
  double c = 1.0;
  int code = kExitOk;
  std::string error;
  json summary;
  double cost = 0.0;
  std::string cert = "n/a";
};

int cmd_compare(const Options& opt) {
  const RunConfig rc = load_config(opt, true);
  if (rc.x0.empty()) throw ConfigError("field 'x0' is required");
  std::vector<PenaltyPtr> pens;
  for (std::size_t i = 0; i < rc.penalties.size(); ++i) {
    pens.push_back(make_penalty(rc.penalties[i], "penalties[" + std::to_string(i) + "]"));
  }
  const auto prob = make_problem(rc, rc.x0);
  int n = 0, m = 0, N = 0;
  double delta = 0.0;
  check(hoc_problem_dims(prob.get(), &n, &m, &N, &delta), "dims");
  prepare_dir(rc.output_dir);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i <= pens.size(); ++i) {
    CompareRow row;
    const hoc_penalty* pen = i == 0 ? nullptr : pens[i - 1].get();
    row.label = pen ? hoc_penalty_label(pen) : "l1";
    row.file = i == 0 ? "trajectory_l1.csv"
                      : "trajectory_" + std::to_string(i) + "_" + hoc_penalty_kind(pen) + ".csv";
    try {
      hoc_result* raw = nullptr;
      if (pen) {
        check(hoc_penalty_equivalence_constant(pen, &row.c), row.label);
        check(hoc_dca_run(prob.get(), pen, &rc.dca, &raw), row.label);
      } else {
        check(hoc_l1_solve(prob.get(), &rc.dca, &raw), row.label);
      }
      const ResultPtr res(raw);
      row.summary = summary_json(res.get(), row.label);
      row.cost = row.summary["cost_history"].back().get<double>();
      if (auto cert = certificate(rc, prob.get(), res.get())) {
        row.cert = cert->passed ? "pass" : "fail";
        row.summary["certificate"] = certificate_json(*cert);
      }
      write_file(rc.output_dir / row.file, trajectory_csv(res.get(), delta));
    } catch (const ApiError& e) {
      row.code = exit_code(e.status);
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  const double wall = seconds_since(t0);

  std::string table = "penalty,l0,J_d,c,iterations,lp_solves,bob_deviation,certificate,status\n";
  json runs = json::array();
  int code = kExitOk;
  for (const auto& row : rows) {
    table += "\"" + row.label + "\",";
    if (row.code == kExitOk) {
      table += fmt17(row.summary["l0"].get<double>()) + "," + fmt17(row.cost) + "," + fmt17(row.c) +
               "," + std::to_string(row.summary["iterations"].get<int>()) + "," +
               std::to_string(row.summary["lp_solves"].get<int>()) + "," +
               fmt17(row.summary["bob_deviation"].get<double>()) + "," + row.cert + ",ok\n";
      json r = row.summary;
      r["c"] = row.c;
      r["trajectory"] = row.file;
      runs.push_back(r);
    } else {
      table += ",,,,,,,error " + std::to_string(row.code) + "\n";
      runs.push_back(json{{"penalty", row.label}, {"error", row.error}, {"exit_code", row.code}});
      std::cerr << "error: " << row.error << "\n";
      if (code == kExitOk) code = row.code;
    }
  }
  write_file(rc.output_dir / "compare.csv", table);
  write_file(rc.output_dir / "compare.json", dump(json{{"runs", runs}, {"wall_time_s", wall}}));
  std::cout << table;
  return code;
}

int cmd_validate(const Options& opt, const std::string& positional) {
  const std::string spec = !positional.empty() ? positional : opt.penalty;
  if (spec.empty()) throw ConfigError("a penalty spec is required");
  const auto pen = make_penalty(json(spec), "penalty");
  hoc_assumption_report rep{};
  check(hoc_penalty_validate(pen.get(), 10000, &rep), "validate");
  json violated = json::array();
  const char* names[] = {"A1", "A2", "A3", "A4"};
  for (int b = 0; b < 4; ++b) {
    if (rep.violated_mask & (1 << b)) violated.push_back(names[b]);
  }
  double c = 0.0;
  json j{{"penalty", hoc_penalty_label(pen.get())},
         {"passed", rep.passed != 0},
         {"violated", violated},
         {"worst_margin", rep.worst_margin},
         {"witness_u", rep.witness_u},
         {"grid_size", rep.grid_size}};
  if (hoc_penalty_equivalence_constant(pen.get(), &c) == HOC_OK) j["equivalence_constant"] = c;
  std::cout << dump(j);
  return rep.passed ? kExitOk : HOC_ERR_ASSUMPTION;
}

std::vector<double> planted_signal(const RunConfig& rc) {
  const std::size_t count = static_cast<std::size_t>(rc.N) * rc.m;
  std::vector<double> u(count, 0.0);
  if (rc.planted.is_array()) {
    if (rc.planted.size() != count) {
      throw ConfigError("field 'planted' must have N * m = " + std::to_string(count) + " entries");
    }
    for (std::size_t i = 0; i < count; ++i) {
      u[i] = number(rc.planted[i], "planted[" + std::to_string(i) + "]");
      if (std::abs(u[i]) > 1.0) throw ConfigError("field 'planted' entries must lie in [-1, 1]");
    }
  } else if (rc.planted.is_object() && rc.planted.contains("support")) {
    const int k = integer(rc.planted["support"], "planted.support");
    if (k < 0 || static_cast<std::size_t>(k) > count) {
      throw ConfigError("field 'planted.support' must lie in [0, N * m]");
    }
    std::mt19937_64 rng(rc.seed);
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates with explicit draws keeps the result library independent
    for (int i = 0; i < k; ++i) {
      const std::size_t span = count - static_cast<std::size_t>(i);
      const std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % span);
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
      u[idx[static_cast<std::size_t>(i)]] = (rng() & 1u) ? 1.0 : -1.0;
    }
  } else {
    throw ConfigError("field 'planted' must be an array or {\"support\": k}");
  }
  return u;
}

std::vector<json> default_catalog() {
  return {json("lp lambda=0.8 p=0.5"),
          json("mcp lambda=1 alpha=0.5"),
          json("scad lambda=0.25 alpha=3"),
          json{{"kind", "lsp"}, {"lambda", 0.1 / std::log(1.0 + 1e6)}, {"alpha", 1e-6}},
          json("l1l2 lambda=0.1"),
          json("capped_l1 lambda=0.8 alpha=0.5")};
}

int cmd_oracle(const Options& opt) {
  RunConfig rc = load_config(opt, true);
  std::vector<double> planted;
  const bool constructed = !rc.planted.is_null();
  if (constructed) {
    planted = planted_signal(rc);
    rc.x0.assign(static_cast<std::size_t>(rc.n), 0.0);
    check(hoc_make_exact_instance(rc.n, rc.m, rc.A.data(), rc.B.data(), rc.T, rc.N, planted.data(),
                                  rc.x0.data()),
          "planted instance");
  }
  if (rc.x0.empty()) throw ConfigError("field 'x0' is required unless 'planted' is given");
  const auto prob = make_problem(rc, rc.x0);
  int n = 0, m = 0, N = 0;
  double delta = 0.0;
  check(hoc_problem_dims(prob.get(), &n, &m, &N, &delta), "dims");

  const bool brute = static_cast<long>(m) * N <= 16;
  const bool cert_path = !brute && hoc_problem_is_double_integrator(prob.get());
  if (!brute && !cert_path) {
    std::cerr << "error: instance has m * N = " << static_cast<long>(m) * N
              << " > 16 samples and no certificate applies\n";
    return HOC_ERR_SIZE;
  }

  const auto specs = rc.penalty_given ? rc.penalties : default_catalog();
  std::vector<PenaltyPtr> pens;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    pens.push_back(make_penalty(specs[i], "penalties[" + std::to_string(i) + "]"));
  }
  prepare_dir(rc.output_dir);

  json out;
  out["x0"] = rc.x0;
  out["delta"] = delta;
  double oracle_min = 0.0;
  if (brute) {
    double eps = 1e-8;
    if (rc.oracle_eps) {
      eps = *rc.oracle_eps;
    } else if (!constructed) {
      std::vector<double> zeta(static_cast<std::size_t>(n));
      check(hoc_problem_drift(prob.get(), zeta.data()), "drift");
      double inf = 0.0;
      for (double z : zeta) inf = std::max(inf, std::abs(z));
      eps = 1e-3 * inf;
    }
    hoc_brute_force_report bf{};
    check(hoc_brute_force_l0(prob.get(), eps, &bf), "brute force");
    out["path"] = "brute_force";
    out["eps"] = eps;
    out["found"] = bf.found != 0;
    out["oracle_min_l0"] = bf.found ? json(bf.min_l0) : json(nullptr);
    out["minimizers"] = bf.minimizers;
    out["feasible_points"] = bf.feasible_points;
    oracle_min = bf.min_l0;
    if (constructed) {
      double size = 0.0;
      for (double v : planted) size += v != 0.0 ? 1.0 : 0.0;
      out["planted"] = planted;
      out["planted_l0"] = size * delta;
    }
    if (!bf.found) {
      out["runs"] = json::array();
      write_file(rc.output_dir / "oracle.json", dump(out));
      std::cout << dump(out);
      return kExitOk;
    }
  } else {
    out["path"] = "certificate";
  }

  json runs = json::array();
  int agree = 0;
  int code = kExitOk;
  for (const auto& pen : pens) {
    json r{{"penalty", hoc_penalty_label(pen.get())}};
    hoc_result* raw = nullptr;
    const hoc_status s = hoc_dca_run(prob.get(), pen.get(), &rc.dca, &raw);
    if (s != HOC_OK) {
      r["error"] = hoc_last_error();
      r["exit_code"] = exit_code(s);
      if (code == kExitOk) code = exit_code(s);
      runs.push_back(r);
      continue;
    }
    const ResultPtr res(raw);
    hoc_result_summary sum{};
    check(hoc_result_summary_get(res.get(), &sum), "summary");
    double c = 0.0;
    check(hoc_penalty_equivalence_constant(pen.get(), &c), "constant");
    r["l0"] = sum.l0;
    r["cost_jd"] = sum.cost;
    r["c"] = c;
    r["iterations"] = sum.iterations;
    r["bob_deviation"] = sum.bob_deviation;
    const bool bob = sum.bob_deviation <= 1e-9 && sum.complementarity_violation == 0.0;
    r["bang_off_bang"] = bob;
    if (bob) r["identity_gap"] = std::abs(sum.cost - c * sum.l0 / delta);
    bool ok = false;
    if (brute) {
      ok = std::abs(sum.l0 - oracle_min) <= 1e-9;
    } else {
      const auto cert = certificate(rc, prob.get(), res.get());
      r["certificate"] = certificate_json(*cert);
      ok = cert->passed != 0;
      oracle_min = cert->l0_expected;
    }
    r["agrees"] = ok;
    agree += ok ? 1 : 0;
    runs.push_back(r);
  }
  if (!brute) out["oracle_min_l0"] = oracle_min;
  out["runs"] = runs;
  out["agreement_rate"] = pens.empty() ? 1.0 : static_cast<double>(agree) / pens.size();
  write_file(rc.output_dir / "oracle.json", dump(out));
  std::cout << dump(out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum hands-off control via DC programming"};
  app.require_subcommand(1);
  Options opt;
  std::string positional;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--output", opt.output, "output directory (overrides output_dir)");
    sub->add_option("--penalty", opt.penalty, "inline penalty, e.g. \"mcp lambda=1 alpha=0.5\"");
    sub->add_option("--warm-start", opt.warm_start, "zero or l1")
        ->check(CLI::IsMember({"zero", "l1"}));
    sub->add_option("--seed", opt.seed, "seed for randomized planted supports");
  };
  auto* solve = app.add_subcommand("solve", "run DCA for one penalty");
  add_common(solve, true);
  auto* compare = app.add_subcommand("compare", "L1 baseline plus every listed penalty");
  add_common(compare, true);
  auto* validate = app.add_subcommand("validate", "check a penalty against the assumptions");
  validate->add_option("spec", positional, "inline penalty spec");
  add_common(validate, false);
  auto* oracle = app.add_subcommand("oracle", "compare DCA with brute force or the certificate");
  add_common(oracle, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(opt);
    if (*compare) return cmd_compare(opt);
    if (*validate) return cmd_validate(opt, positional);
    if (*oracle) return cmd_oracle(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
