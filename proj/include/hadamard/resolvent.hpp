#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hadamard/fields.hpp"

namespace hadamard {

struct ResolventConfig {
  double lambda = 1.0;  // 0 selects the identity
  double tol = 1e-10;
  std::size_t max_iter = 10000;

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) raise(Errc::domain_error, "resolvent parameter must be >= 0");
    if (!(tol > 0.0)) raise(Errc::domain_error, "resolvent tolerance must be positive");
    if (max_iter == 0) raise(Errc::domain_error, "max_iter must be positive");
  }
};

/// J_lambda x, with J_0 = identity.
inline Point resolvent(const MonotoneField& field, const ResolventConfig& cfg, const Point& x) {
  cfg.validate();
  require_member(*field.space, x);
  if (cfg.lambda == 0.0) return x;
  return field.resolvent(cfg.lambda, x, SolverTolerance{cfg.tol, cfg.max_iter});
}

inline Point resolvent(const MonotoneField& field, double lambda, const Point& x) {
  return resolvent(field, ResolventConfig{lambda}, x);
}

/// rho(J_lambda x, J_mu((1 - mu/lambda) J_lambda x (+) (mu/lambda) x)) for 0 < mu <= lambda.
inline double resolvent_identity_residual(const MonotoneField& field, double lambda, double mu, const Point& x) {
  if (!(mu > 0.0) || !(mu <= lambda)) raise(Errc::domain_error, "resolvent identity needs 0 < mu <= lambda");
  const Space& space = *field.space;
  const Point jl = resolvent(field, lambda, x);
  const Point u = geodesic_point(space, jl, x, mu / lambda);
  return space.dist(jl, resolvent(field, mu, u));
}

inline std::vector<double> default_profile_grid(std::size_t points = 11) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

struct ProfileSample {
  double t;
  double phi;
};

/// phi(t) = rho(gamma_{x,J x}(t), gamma_{y,J y}(t)); nonincreasing for firmly
/// nonexpansive J.
inline std::vector<ProfileSample> firm_nonexpansiveness_profile(const MonotoneField& field, double lambda,
                                                                const Point& x, const Point& y,
                                                                const std::vector<double>& grid = default_profile_grid()) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    raise(Errc::domain_error, "profile grid must run from 0 to 1");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) raise(Errc::domain_error, "profile grid must be strictly increasing");
  }
  const Space& space = *field.space;
  const Point jx = resolvent(field, lambda, x), jy = resolvent(field, lambda, y);
  std::vector<ProfileSample> out;
  out.reserve(grid.size());
  for (double t : grid) {
    out.push_back({t, space.dist(geodesic_point(space, x, jx, t), geodesic_point(space, y, jy, t))});
  }
  return out;
}

/// Largest increase phi(t_{i+1}) - phi(t_i) along a profile (<= 0 when monotone).
inline double profile_max_increase(const std::vector<ProfileSample>& profile) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < profile.size(); ++i) worst = std::max(worst, profile[i].phi - profile[i - 1].phi);
  return profile.size() < 2 ? 0.0 : worst;
}

/// RHS - LHS of 2 rho^2(Jx,Jy) <= rho^2(x,Jy) + rho^2(y,Jx) - rho^2(Jx,x) - rho^2(Jy,y).
inline double firm_inequality_residual(const MonotoneField& field, double lambda, const Point& x, const Point& y) {
  const Space& space = *field.space;
  const Point jx = resolvent(field, lambda, x), jy = resolvent(field, lambda, y);
  auto sq = [&](const Point& a, const Point& b) {
    const double d = space.dist(a, b);
    return d * d;
  };
  return sq(x, jy) + sq(y, jx) - sq(jx, x) - sq(jy, y) - 2.0 * sq(jx, jy);
}

/// A_lambda x = lambda^{-1} rho(x, J_lambda x)(-gamma_{x, J_lambda x}).
struct YosidaVec {
  TangentVec vec;
  double norm_value = 0.0;
};

inline YosidaVec yosida(const MonotoneField& field, double lambda, const Point& x) {
  if (!(lambda > 0.0)) raise(Errc::domain_error, "Yosida parameter must be positive");
  const Point j = resolvent(field, lambda, x);
  const double norm = field.space->dist(x, j) / lambda;
  return {negative_direction(field.space, x, j, norm), norm};
}

/// -g_p(gamma_{p,x}, gamma_{p,q}) - g_p(-gamma_{p,x}, gamma_{p,q}); nonnegative
/// wherever the negative geodesic exists.
inline double negative_geodesic_residual(const SpaceHandle& space, const Point& p, const Point& x, const Point& q) {
  const TangentVec gx = TangentVec::direction(space, p, x);
  const TangentVec gq = TangentVec::direction(space, p, q);
  const TangentVec nx = negative_direction(space, p, x, 1.0);
  return -tangent_inner(gx, gq) - tangent_inner(nx, gq);
}

struct LimitRow {
  double lambda;
  double dist_to_limit;  // rho(J_lambda x, reference), or NaN without one
  double increment;      // rho(J_lambda x, J_prev x); NaN in the first row
};

struct LimitReport {
  Point estimate;
  std::optional<Point> reference;
  std::vector<LimitRow> rows;
};

namespace detail {

inline LimitReport limit_scan(const MonotoneField& field, const Point& x, const std::vector<double>& schedule,
                              std::optional<Point> reference) {
  LimitReport report;
  report.reference = std::move(reference);
  const Space& space = *field.space;
  std::optional<Point> prev;
  for (double lambda : schedule) {
    Point j = resolvent(field, lambda, x);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back({lambda, report.reference ? space.dist(j, *report.reference) : nan,
                           prev ? space.dist(j, *prev) : nan});
    prev = j;
    report.estimate = std::move(j);
  }
  return report;
}

inline void require_schedule(const std::vector<double>& schedule, bool increasing) {
  if (schedule.empty()) raise(Errc::schedule_error, "empty lambda schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || !std::isfinite(schedule[i])) raise(Errc::schedule_error, "lambda must be positive");
    if (i > 0 && (increasing ? !(schedule[i] > schedule[i - 1]) : !(schedule[i] < schedule[i - 1]))) {
      raise(Errc::schedule_error, increasing ? "schedule must increase strictly" : "schedule must decrease strictly");
    }
  }
}

}  // namespace detail

/// lambda -> 0+: J_lambda x -> P_{cl dom A} x. Without a domain witness only
/// Cauchy increments are reported.
inline LimitReport resolvent_limit_zero(const MonotoneField& field, const Point& x,
                                        const std::vector<double>& schedule) {
  detail::require_schedule(schedule, false);
  std::optional<Point> ref;
  if (field.domain) ref = field.domain->project(*field.space, x);
  return detail::limit_scan(field, x, schedule, std::move(ref));
}

/// lambda -> infinity: J_lambda x -> P_{A^{-1}(0)} x. With require_reference a
/// missing zero-set witness raises NoZeroSet; otherwise increments are reported.
inline LimitReport resolvent_limit_infinity(const MonotoneField& field, const Point& x,
                                            const std::vector<double>& schedule, bool require_reference = false) {
  detail::require_schedule(schedule, true);
  std::optional<Point> ref;
  if (field.zero_set) {
    ref = field.zero_set->project(*field.space, x);
  } else if (require_reference) {
    raise(Errc::no_zero_set, "field '" + field.name + "' has no zero-set witness");
  }
  return detail::limit_scan(field, x, schedule, std::move(ref));
}

struct ContinuityRow {
  double mu;
  double lambda;
  double lhs;  // rho(J_mu x, J_lambda x)
  double rhs;  // (1 - mu/lambda) rho(x, J_lambda x)
};

/// Consecutive-grid check of rho(J_mu x, J_lambda x) <= (1 - mu/lambda) rho(x, J_lambda x)
/// on an equispaced grid over [a, b] (a = 0 uses J_0 = identity).
inline std::vector<ContinuityRow> resolvent_continuity_scan(const MonotoneField& field, const Point& x, double a,
                                                            double b, std::size_t steps) {
  if (!(a >= 0.0) || !(b >= a) || steps == 0) raise(Errc::domain_error, "bad continuity interval");
  const Space& space = *field.space;
  std::vector<ContinuityRow> rows;
  Point prev = resolvent(field, a, x);
  double prev_l = a;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double l = a + (b - a) * static_cast<double>(i) / static_cast<double>(steps);
    Point j = resolvent(field, l, x);
    const double ratio = l > 0.0 ? prev_l / l : 1.0;
    rows.push_back({prev_l, l, space.dist(prev, j), (1.0 - ratio) * space.dist(x, j)});
    prev = std::move(j);
    prev_l = l;
  }
  return rows;
}

}  // namespace hadamard
