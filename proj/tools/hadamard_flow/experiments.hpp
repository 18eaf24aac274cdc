#pragma once

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "build.hpp"

namespace flow {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Artifact {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> row_errors;  // parallel to rows; empty when the row computed cleanly
  nlohmann::json metadata = nlohmann::json::object();
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  bool violation = false;

  void add(std::vector<Cell> row, bool flagged, std::string error = {}) {
    row.emplace_back(static_cast<std::int64_t>(flagged ? 1 : 0));
    rows.push_back(std::move(row));
    row_errors.push_back(std::move(error));
    violation = violation || flagged;
  }

  int exit_code() const { return violation ? 2 : 0; }
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return hadamard::detail::format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

inline std::string to_csv(const Artifact& a) {
  std::string out = "# config_hash=" + hash_hex(a.config_hash) + " seed=" + std::to_string(a.seed) + "\n";
  for (std::size_t i = 0; i < a.columns.size(); ++i) out += (i ? "," : "") + a.columns[i];
  out += "\n";
  for (const auto& row : a.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    // JSON has no NaN/inf; keep them as 17-digit strings.
    if (!std::isfinite(*d)) return hadamard::detail::format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

inline std::string to_json(const Artifact& a) {
  nlohmann::json doc;
  doc["metadata"] = a.metadata;
  doc["metadata"]["command"] = a.command;
  doc["metadata"]["config_hash"] = hash_hex(a.config_hash);
  doc["metadata"]["seed"] = a.seed;
  doc["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < a.columns.size(); ++i) row[a.columns[i]] = cell_json(a.rows[r][i]);
    if (!a.row_errors[r].empty()) row["error"] = a.row_errors[r];
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

inline void write_artifact(const Artifact& a, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = (std::filesystem::path(out_dir) / a.command).string();
  for (const auto& [path, body] : {std::pair{stem + ".csv", to_csv(a)}, std::pair{stem + ".json", to_json(a)}}) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(Errc::config_error, "cannot write '" + path + "'");
    f << body;
  }
}

inline const std::set<std::string>& run_keys() {
  static const std::set<std::string> k{"seed",   "samples",  "x",          "t",           "ks",
                                       "k_ref",  "lambdas",  "lambda",     "mu",          "j_max",
                                       "k_max",  "times",    "target_tol", "tail_fraction", "zero_schedule",
                                       "infinity_schedule",    "limit_tol",  "tol"};
  return k;
}

struct Context {
  const Config& cfg;
  hadamard::SpaceHandle space;
  std::optional<hadamard::MonotoneField> field;
  std::uint64_t seed;
};

namespace detail {

/// Runs one row; numeric errors become flagged NaN rows instead of aborting.
inline void guarded_row(Artifact& a, std::vector<Cell> prefix, std::size_t value_count,
                        const std::function<std::pair<std::vector<Cell>, bool>()>& body) {
  try {
    auto [values, flag] = body();
    prefix.insert(prefix.end(), values.begin(), values.end());
    a.add(std::move(prefix), flag);
  } catch (const hadamard::Error& e) {
    for (std::size_t i = 0; i < value_count; ++i) prefix.emplace_back(kNaN);
    a.add(std::move(prefix), true, std::string(to_string(e.code())) + ": " + e.what());
  }
}

inline const hadamard::MonotoneField& require_field(const Context& ctx) {
  if (!ctx.field) raise(Errc::config_error, ctx.cfg.origin() + ": this experiment needs a [field] section");
  return *ctx.field;
}

inline std::vector<double> decades(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::pow(10.0, e));
  return out;
}

inline std::vector<std::size_t> step_counts(const Config& cfg, const std::string& key, std::vector<double> fallback) {
  std::vector<std::size_t> out;
  for (double v : cfg.numbers("run", key, fallback)) {
    if (!(v >= 1.0) || v != std::floor(v)) cfg.fail(cfg.line_of("run", key), key + " must hold positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace detail

inline Artifact run_axioms(const Context& ctx) {
  using namespace hadamard;
  const Space& space = *ctx.space;
  const auto n = static_cast<std::size_t>(ctx.cfg.integer("run", "samples", 10000));
  const double slack = ctx.cfg.number("run", "tol", 1e-9);
  Artifact a;
  a.columns = {"check", "n_samples", "min_residual", "flag"};
  struct Check {
    const char* name;
    std::function<std::optional<double>(Rng&)> residual;
  };
  const SpaceHandle h = ctx.space;
  const std::vector<Check> checks{
      {"triangle",
       [&](Rng& r) -> std::optional<double> {
         const Point x = space.sample(r), y = space.sample(r), z = space.sample(r);
         return space.dist(x, y) + space.dist(y, z) - space.dist(x, z);
       }},
      {"symmetry",
       [&](Rng& r) -> std::optional<double> {
         const Point x = space.sample(r), y = space.sample(r);
         return -std::abs(space.dist(x, y) - space.dist(y, x));
       }},
      {"geodesic_speed",
       [&](Rng& r) -> std::optional<double> {
         const GeodesicSegment g(h, space.sample(r), space.sample(r));
         const double s = r.uniform(), t = r.uniform();
         return -std::abs(space.dist(g.eval(s), g.eval(t)) - g.length() * std::abs(s - t));
       }},
      {"cn",
       [&](Rng& r) -> std::optional<double> {
         const GeodesicSegment g(h, space.sample(r), space.sample(r));
         const Point v = space.sample(r);
         return cn_residual(g, v, r.uniform());
       }},
      {"quadrilateral",
       [&](Rng& r) -> std::optional<double> {
         const Point x = space.sample(r), y = space.sample(r), u = space.sample(r), v = space.sample(r);
         return quad_residual(space, x, y, u, v);
       }},
      {"angle_comparison",
       [&](Rng& r) -> std::optional<double> {
         const Point p = space.sample(r), x = space.sample(r), y = space.sample(r);
         if (space.dist(p, x) == 0.0 || space.dist(p, y) == 0.0) return std::nullopt;
         return comparison_angle(space, p, x, y).radians - alexandrov_angle(space, p, x, y).radians;
       }},
      {"tangent_sandwich",
       [&](Rng& r) -> std::optional<double> {
         const Point p = space.sample(r);
         const TangentVec u = TangentVec::make(h, p, r.uniform(0.0, 2.0), space.sample(r));
         const TangentVec v = TangentVec::make(h, p, r.uniform(0.0, 2.0), space.sample(r));
         const double d = tangent_distance(u, v);
         return std::min(d - std::abs(u.norm() - v.norm()), u.norm() + v.norm() - d);
       }},
      {"quasi_inner_bound",
       [&](Rng& r) -> std::optional<double> {
         const Point p = space.sample(r), x = space.sample(r), y = space.sample(r);
         const double t = r.uniform(0.0, 2.0), s = r.uniform(0.0, 2.0);
         const TangentVec u = TangentVec::make(h, p, t * space.dist(p, x), x);
         const TangentVec v = TangentVec::make(h, p, s * space.dist(p, y), y);
         return tangent_inner(u, v) - quasi_inner(space, p, x, y, t, s);
       }},
  };
  for (std::size_t c = 0; c < checks.size(); ++c) {
    detail::guarded_row(a, {std::string(checks[c].name), static_cast<std::int64_t>(n)}, 1, [&] {
      Rng rng(split_seed(ctx.seed, c));
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (auto r = checks[c].residual(rng)) worst = std::min(worst, *r);
      }
      return std::pair{std::vector<Cell>{worst}, worst < -slack};
    });
  }
  a.metadata["tolerance"] = slack;
  return a;
}

inline Artifact run_prox(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  Artifact a;
  a.columns = {"lambda", "point", "dist_moved", "flag"};
  const bool has_norm = static_cast<bool>(field.min_norm);
  const double norm = has_norm ? field.min_norm(x) : kNaN;
  for (double lambda : ctx.cfg.numbers("run", "lambdas", detail::decades(-2, 2))) {
    std::vector<Cell> prefix{lambda};
    try {
      const hadamard::Point j = hadamard::resolvent(field, lambda, x);
      const double moved = ctx.space->dist(x, j);
      // Flag a violated Yosida bound rho(x, J x)/lambda <= |Ax|.
      const bool flag = has_norm && lambda > 0.0 && moved / lambda > norm + 1e-8;
      a.add({lambda, ctx.space->format(j), moved}, flag);
    } catch (const hadamard::Error& e) {
      a.add({lambda, std::string(""), kNaN}, true, std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["min_norm"] = has_norm ? nlohmann::json(hadamard::detail::format_double(norm)) : nlohmann::json(nullptr);
  return a;
}

inline Artifact run_sweep(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  auto lambdas = ctx.cfg.numbers("run", "lambdas", detail::decades(-3, 3));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1]))) {
      ctx.cfg.fail(ctx.cfg.line_of("run", "lambdas"), "lambdas must be positive and increasing");
    }
  }
  Artifact a;
  a.columns = {"lambda", "dist_to_limit", "flag"};
  std::optional<hadamard::Point> limit;
  if (field.zero_set) limit = field.zero_set->project(*ctx.space, x);
  std::optional<hadamard::Point> prev;
  double prev_lambda = 0.0;
  for (double lambda : lambdas) {
    detail::guarded_row(a, {lambda}, 1, [&] {
      const hadamard::Point j = hadamard::resolvent(field, lambda, x);
      // Continuity estimate between consecutive grid points.
      bool flag = false;
      if (prev) {
        const double lhs = ctx.space->dist(*prev, j);
        const double rhs = (1.0 - prev_lambda / lambda) * ctx.space->dist(x, j);
        flag = lhs > rhs + 1e-8;
      }
      prev = j;
      prev_lambda = lambda;
      return std::pair{std::vector<Cell>{limit ? ctx.space->dist(j, *limit) : kNaN}, flag};
    });
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["limit"] = limit ? ctx.space->format(*limit) : std::string("unknown");
  return a;
}

inline Artifact run_limits(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  const double limit_tol = ctx.cfg.number("run", "limit_tol", 1e-5);
  Artifact a;
  a.columns = {"end", "lambda", "dist_to_limit", "flag"};
  nlohmann::json increments = nlohmann::json::object();
  auto emit = [&](const std::string& end, const hadamard::LimitReport& rep) {
    nlohmann::json inc = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      bool flag = false;
      if (rep.reference) {
        if (i > 0 && r.dist_to_limit > rep.rows[i - 1].dist_to_limit + 1e-12) flag = true;
        if (i + 1 == rep.rows.size() && r.dist_to_limit > limit_tol) flag = true;
      }
      a.add({end, r.lambda, r.dist_to_limit}, flag);
      inc.push_back(std::isfinite(r.increment) ? nlohmann::json(r.increment) : nlohmann::json(nullptr));
    }
    increments[end] = inc;
    a.metadata[end + "_limit"] = rep.reference ? ctx.space->format(*rep.reference) : std::string("unknown");
  };
  auto zero = ctx.cfg.numbers("run", "zero_schedule", detail::decades(-6, -1));
  auto inf = ctx.cfg.numbers("run", "infinity_schedule", detail::decades(1, 6));
  std::sort(zero.rbegin(), zero.rend());
  std::sort(inf.begin(), inf.end());
  try {
    emit("zero", hadamard::resolvent_limit_zero(field, x, zero));
    emit("infinity", hadamard::resolvent_limit_infinity(field, x, inf));
  } catch (const hadamard::Error& e) {
    if (e.code() == Errc::schedule_error) raise(Errc::config_error, ctx.cfg.origin() + ": " + e.what());
    throw;
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["limit_tol"] = limit_tol;
  a.metadata["increments"] = increments;
  return a;
}

inline Artifact run_yosida(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  Artifact a;
  a.columns = {"lambda", "norm", "min_norm", "flag"};
  const double n = hadamard::field_min_norm(field, x);
  for (double lambda : ctx.cfg.numbers("run", "lambdas", detail::decades(-3, 3))) {
    detail::guarded_row(a, {lambda}, 2, [&] {
      const auto y = hadamard::yosida(field, lambda, x);
      return std::pair{std::vector<Cell>{y.norm_value, n}, y.norm_value > n + 1e-8};
    });
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["min_norm_closed_form"] = static_cast<bool>(field.min_norm);
  return a;
}

inline Artifact run_error_table(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  const double t = ctx.cfg.number("run", "t", 1.0);
  const auto ks = detail::step_counts(ctx.cfg, "ks", {1, 2, 4, 8, 16, 32, 64, 128, 256});
  const auto k_ref = static_cast<std::size_t>(ctx.cfg.integer("run", "k_ref", hadamard::kDefaultReferenceSteps));
  Artifact a;
  a.columns = {"k", "error", "bound", "flag"};
  const auto table = hadamard::error_table(field, x, t, ks, k_ref);
  for (const auto& r : table.rows) a.add({static_cast<std::int64_t>(r.k), r.error, r.bound}, r.flag);
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["t"] = t;
  a.metadata["k_ref"] = k_ref;
  a.metadata["min_norm"] = table.min_norm;
  a.metadata["reference_slack"] = table.reference_slack;
  return a;
}

inline Artifact run_trajectory(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  std::vector<double> fallback;
  for (int i = 0; i <= 40; ++i) fallback.push_back(0.5 * i);
  const auto times = ctx.cfg.numbers("run", "times", fallback);
  const double tol = ctx.cfg.number("run", "target_tol", 0.25);
  const double tail_fraction = ctx.cfg.number("run", "tail_fraction", 0.5);
  Artifact a;
  a.columns = {"t", "k_used", "dist_to_zero_set", "flag"};
  const auto tr = hadamard::trajectory(field, x, times, tol);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double d = tr.reference ? tr.dist_to_reference[i] : kNaN;
    const bool flag = tr.reference && i > 0 && d > tr.dist_to_reference[i - 1] + 1e-7;
    a.add({tr.times[i], static_cast<std::int64_t>(tr.k_used[i]), d}, flag);
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["target_tol"] = tol;
  if (tr.reference && tr.points.size() >= 2) {
    const auto tail = hadamard::tail_window(tr.points, tail_fraction);
    if (tail.size() >= 2) {
      const auto rep = hadamard::delta_convergence_check(*ctx.space, tail, *tr.reference, &field);
      a.metadata["delta"] = {{"banner", hadamard::DeltaReport::banner},
                             {"center", ctx.space->format(rep.center)},
                             {"center_to_candidate", rep.center_to_candidate},
                             {"center_radius", rep.center_radius},
                             {"kadec_klee_stable", rep.kadec_klee_stable},
                             {"fejer", rep.fejer},
                             {"center_residual", *rep.center_residual},
                             {"pass", rep.pass}};
      if (!rep.pass) a.violation = true;
    }
    a.metadata["reference"] = ctx.space->format(*tr.reference);
  }
  return a;
}

inline Artifact run_double_seq(const Context& ctx) {
  const auto& field = detail::require_field(ctx);
  const hadamard::Point x = parse_point(ctx.cfg, *ctx.space, "run", "x");
  const double lambda = ctx.cfg.number("run", "lambda", 0.5);
  const auto jn = static_cast<std::size_t>(ctx.cfg.integer("run", "j_max", 8));
  const auto kn = static_cast<std::size_t>(ctx.cfg.integer("run", "k_max", 8));
  auto mu = ctx.cfg.numbers("run", "mu", std::vector<double>{lambda});
  if (mu.size() == 1) mu.assign(jn, mu.front());
  const double tol = ctx.cfg.number("run", "tol", 1e-7);
  hadamard::DoubleSeqReport rep;
  try {
    rep = hadamard::double_seq_verify(field, x, lambda, mu, jn, kn);
  } catch (const hadamard::Error& e) {
    if (e.code() == Errc::schedule_error) raise(Errc::config_error, ctx.cfg.origin() + ": " + e.what());
    throw;
  }
  Artifact a;
  a.columns = {"j", "k", "actual", "bound", "flag"};
  for (std::size_t j = 0; j < jn; ++j) {
    for (std::size_t k = 0; k < kn; ++k) {
      a.add({static_cast<std::int64_t>(j), static_cast<std::int64_t>(k), rep.actual[j][k], rep.bound[j][k]},
            rep.actual[j][k] > rep.bound[j][k] + tol);
    }
  }
  a.metadata["x"] = ctx.space->format(x);
  a.metadata["lambda"] = lambda;
  a.metadata["min_norm"] = rep.min_norm;
  a.metadata["max_violation"] = rep.max_violation;
  return a;
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"axioms", "prox", "sweep", "yosida", "limits", "error-table", "trajectory", "double-seq"};
  return c;
}

/// Builds the space (and field, if configured) and runs one experiment.
/// Configuration problems raise Errc::config_error (or invalid_spec).
inline Artifact run_experiment(const std::string& command, const Config& cfg, std::optional<std::uint64_t> seed_override) {
  cfg.allow_keys("run", run_keys());
  const auto space = build_space(cfg);
  std::optional<hadamard::MonotoneField> field;
  if (cfg.has("field", "name")) field = build_field(cfg, space);
  const std::uint64_t seed = seed_override ? *seed_override : cfg.integer("run", "seed", 0);
  const Context ctx{cfg, space, std::move(field), seed};
  Artifact a;
  if (command == "axioms") a = run_axioms(ctx);
  else if (command == "prox") a = run_prox(ctx);
  else if (command == "sweep") a = run_sweep(ctx);
  else if (command == "yosida") a = run_yosida(ctx);
  else if (command == "limits") a = run_limits(ctx);
  else if (command == "error-table") a = run_error_table(ctx);
  else if (command == "trajectory") a = run_trajectory(ctx);
  else if (command == "double-seq") a = run_double_seq(ctx);
  else raise(Errc::config_error, "unknown command '" + command + "'");
  a.command = command;
  a.seed = seed;
  a.config_hash = fnv1a64(cfg.text());
  a.metadata["space"] = space->describe();
  if (ctx.field) a.metadata["field"] = ctx.field->name;
  return a;
}

}  // namespace flow
