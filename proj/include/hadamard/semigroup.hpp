#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hadamard/resolvent.hpp"

namespace hadamard {

/// J_{t/k}^k x, the k-th exponential-formula iterate (x itself at t = 0).
inline Point exp_formula(const MonotoneField& field, const Point& x, double t, std::size_t k) {
  if (!(t >= 0.0) || !std::isfinite(t)) raise(Errc::domain_error, "flow time must be >= 0");
  if (k == 0) raise(Errc::domain_error, "step count must be positive");
  require_member(*field.space, x);
  if (t == 0.0) return x;
  const double lambda = t / static_cast<double>(k);
  Point z = x;
  for (std::size_t i = 0; i < k; ++i) z = resolvent(field, lambda, z);
  return z;
}

/// |Ax| * 2t / sqrt(k).
inline double error_bound(double min_norm, double t, std::size_t k) {
  if (k == 0) raise(Errc::domain_error, "step count must be positive");
  if (min_norm == 0.0 || t == 0.0) return 0.0;
  return min_norm * 2.0 * t / std::sqrt(static_cast<double>(k));
}

struct FlowResult {
  Point point;
  std::size_t k_used = 1;
};

/// Smallest power of two k with |Ax| 2t/sqrt(k) <= target_tol.
inline std::size_t adaptive_steps(double min_norm, double t, double target_tol, std::size_t max_k = std::size_t{1} << 26) {
  if (!(target_tol > 0.0)) raise(Errc::domain_error, "target tolerance must be positive");
  if (!std::isfinite(min_norm)) raise(Errc::no_norm_bound, "|Ax| is infinite: x is outside dom A");
  std::size_t k = 1;
  while (error_bound(min_norm, t, k) > target_tol) {
    if (k >= max_k) raise(Errc::domain_error, "target tolerance needs more than " + std::to_string(max_k) + " steps");
    k *= 2;
  }
  return k;
}

inline double require_norm_bound(const MonotoneField& field, const Point& x, std::optional<double> norm_bound) {
  if (norm_bound) return *norm_bound;
  if (!field.min_norm) raise(Errc::no_norm_bound, "field '" + field.name + "' has no |Ax| oracle; supply a bound");
  return field.min_norm(x);
}

/// S(t)x to within target_tol via the exponential formula at adaptive k.
inline FlowResult semigroup(const MonotoneField& field, const Point& x, double t, double target_tol,
                            std::optional<double> norm_bound = std::nullopt) {
  if (t == 0.0) return {x, 1};
  const double n = require_norm_bound(field, x, norm_bound);
  if (n == 0.0) return {x, 1};
  const std::size_t k = adaptive_steps(n, t, target_tol);
  return {exp_formula(field, x, t, k), k};
}

/// sqrt((k lambda - t_j)^2 + k lambda^2) + sqrt((k lambda - t_j)^2 + lambda t_j),
/// with t_j = mu_1 + ... + mu_j.
inline double double_seq_bound(double lambda, const std::vector<double>& mu, std::size_t j, std::size_t k) {
  if (!(lambda > 0.0)) raise(Errc::schedule_error, "lambda must be positive");
  if (j > mu.size()) raise(Errc::schedule_error, "schedule shorter than index j");
  double tj = 0.0;
  for (double m : mu) {
    if (!(m > 0.0) || m > lambda) raise(Errc::schedule_error, "step sizes must lie in (0, lambda]");
  }
  for (std::size_t i = 0; i < j; ++i) tj += mu[i];
  const double kl = static_cast<double>(k) * lambda;
  const double gap = kl - tj;
  return std::sqrt(gap * gap + kl * lambda) + std::sqrt(gap * gap + lambda * tj);
}

struct DoubleSeqReport {
  double min_norm = 0.0;
  double max_violation = 0.0;                 // max of A_{j,k} - |Ax| * bound
  std::vector<std::vector<double>> actual;    // actual[j][k]
  std::vector<std::vector<double>> bound;     // |Ax| * double_seq_bound
};

/// Builds A_{j,k} = rho(J_{mu_j}...J_{mu_1} x, J_lambda^k x) for j < j_count,
/// k < k_count and compares with the double-sequence bound.
inline DoubleSeqReport double_seq_verify(const MonotoneField& field, const Point& x, double lambda,
                                         const std::vector<double>& mu, std::size_t j_count, std::size_t k_count) {
  if (j_count == 0 || k_count == 0) raise(Errc::schedule_error, "empty grid");
  if (mu.size() + 1 < j_count) raise(Errc::schedule_error, "schedule shorter than the grid");
  double_seq_bound(lambda, mu, 0, 0);  // validates the schedule
  const Space& space = *field.space;
  DoubleSeqReport rep;
  rep.min_norm = field_min_norm(field, x);
  std::vector<Point> left{x}, right{x};
  for (std::size_t j = 1; j < j_count; ++j) left.push_back(resolvent(field, mu[j - 1], left.back()));
  for (std::size_t k = 1; k < k_count; ++k) right.push_back(resolvent(field, lambda, right.back()));
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.actual.assign(j_count, std::vector<double>(k_count));
  rep.bound.assign(j_count, std::vector<double>(k_count));
  for (std::size_t j = 0; j < j_count; ++j) {
    for (std::size_t k = 0; k < k_count; ++k) {
      rep.actual[j][k] = space.dist(left[j], right[k]);
      rep.bound[j][k] = rep.min_norm == 0.0 ? 0.0 : rep.min_norm * double_seq_bound(lambda, mu, j, k);
      rep.max_violation = std::max(rep.max_violation, rep.actual[j][k] - rep.bound[j][k]);
    }
  }
  return rep;
}

/// rho(S(s+t)x, S(s)S(t)x) with every flow evaluated at k_ref steps.
inline double semigroup_law_residual(const MonotoneField& field, const Point& x, double s, double t,
                                     std::size_t k_ref) {
  if (!(s >= 0.0) || !(t >= 0.0)) raise(Errc::domain_error, "semigroup times must be >= 0");
  const Point joint = exp_formula(field, x, s + t, k_ref);
  const Point split = exp_formula(field, exp_formula(field, x, t, k_ref), s, k_ref);
  return field.space->dist(joint, split);
}

/// Error envelope for the law residual: bound(s+t) + bound(s) + bound(t).
inline double semigroup_law_envelope(double min_norm, double s, double t, std::size_t k_ref) {
  return error_bound(min_norm, s + t, k_ref) + error_bound(min_norm, s, k_ref) + error_bound(min_norm, t, k_ref);
}

struct ErrorRow {
  std::size_t k;
  double error;
  double bound;  // |Ax| 2t/sqrt(k)
  bool flag;     // error > bound + reference slack
};

struct ErrorTable {
  std::string field_name;
  std::string space;
  double t = 0.0;
  std::size_t k_ref = 8192;
  double min_norm = 0.0;
  double reference_slack = 0.0;  // |Ax| 2t/sqrt(k_ref) + 1e-8
  std::vector<ErrorRow> rows;

  bool ok() const {
    for (const auto& r : rows) {
      if (r.flag) return false;
    }
    return true;
  }
};

inline constexpr std::size_t kDefaultReferenceSteps = 8192;

/// Measured rho(J_{t/k}^k x, S_ref(t)x) against the generation bound, with
/// S_ref the k_ref-step iterate. The flag tolerance adds the reference error.
inline ErrorTable error_table(const MonotoneField& field, const Point& x, double t, const std::vector<std::size_t>& ks,
                              std::size_t k_ref = kDefaultReferenceSteps, std::optional<double> norm_bound = std::nullopt) {
  ErrorTable table;
  table.field_name = field.name;
  table.space = field.space->describe();
  table.t = t;
  table.k_ref = k_ref;
  table.min_norm = require_norm_bound(field, x, norm_bound);
  table.reference_slack = error_bound(table.min_norm, t, k_ref) + 1e-8;
  const Point ref = exp_formula(field, x, t, k_ref);
  for (std::size_t k : ks) {
    const double err = field.space->dist(exp_formula(field, x, t, k), ref);
    const double bound = error_bound(table.min_norm, t, k);
    table.rows.push_back({k, err, bound, !(err <= bound + table.reference_slack)});
  }
  return table;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<std::size_t> k_used;
  std::optional<Point> reference;  // a zero of A (projection of x onto A^{-1}(0))
  std::vector<double> dist_to_reference;
};

/// S(t_i)x for increasing times, each with its own adaptive k.
inline Trajectory trajectory(const MonotoneField& field, const Point& x, const std::vector<double>& times,
                             double target_tol, std::optional<double> norm_bound = std::nullopt) {
  Trajectory tr;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      raise(Errc::domain_error, "trajectory times must be nonnegative and increasing");
    }
  }
  const double n = times.empty() ? 0.0 : require_norm_bound(field, x, norm_bound);
  if (field.zero_set) tr.reference = field.zero_set->project(*field.space, x);
  for (double t : times) {
    FlowResult r = semigroup(field, x, t, target_tol, n);
    tr.times.push_back(t);
    tr.k_used.push_back(r.k_used);
    if (tr.reference) tr.dist_to_reference.push_back(field.space->dist(*tr.reference, r.point));
    tr.points.push_back(std::move(r.point));
  }
  return tr;
}

/// Largest increase of rho(reference, S(t_i)x) between consecutive times.
inline double fejer_max_increase(const Trajectory& tr) {
  double worst = 0.0;
  for (std::size_t i = 1; i < tr.dist_to_reference.size(); ++i) {
    worst = std::max(worst, tr.dist_to_reference[i] - tr.dist_to_reference[i - 1]);
  }
  return worst;
}

}  // namespace hadamard
