#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hadamard/resolvent.hpp"

namespace hadamard {

/// Last ceil(fraction * n) points: the finite window standing in for limsup.
inline std::vector<Point> tail_window(const std::vector<Point>& points, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) raise(Errc::domain_error, "tail fraction must lie in (0, 1]");
  const auto n = points.size();
  const auto keep = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  return std::vector<Point>(points.end() - static_cast<std::ptrdiff_t>(std::min(keep, n)), points.end());
}

inline double max_radius(const Space& space, const Point& z, const std::vector<Point>& pts) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, space.dist(z, p));
  return r;
}

namespace detail {

inline std::size_t farthest(const Space& space, const Point& z, const std::vector<Point>& pts) {
  std::size_t best = 0;
  double d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double di = space.dist(z, pts[i]);
    if (di > d) {
      d = di;
      best = i;
    }
  }
  return best;
}

/// Descent on the convex functional z -> max_k rho(z, x_k) from `start`:
/// Badoiu-Clarkson steps toward the farthest point, then a pattern search along
/// geodesics toward tail points and the midpoint of the two farthest points.
inline Point minimize_max_radius(const Space& space, const std::vector<Point>& pts, Point start) {
  Point best = start;
  double best_f = max_radius(space, best, pts);
  Point z = start;
  for (int i = 1; i <= 400; ++i) {
    const Point& far = pts[farthest(space, z, pts)];
    if (space.dist(z, far) == 0.0) break;
    z = space.geodesic(z, far, 1.0 / (i + 1.0));
    const double f = max_radius(space, z, pts);
    if (f < best_f) {
      best_f = f;
      best = z;
    }
  }
  // Accept only decreases above rounding noise, so the search cannot creep
  // forever on a flat stretch of the objective.
  double step = 0.5;
  for (int round = 0; round < 4000 && step > 1e-13 && best_f > 0.0; ++round) {
    const double noise = 4.0 * std::numeric_limits<double>::epsilon() * best_f;
    std::vector<Point> targets = pts;
    {
      const std::size_t i1 = farthest(space, best, pts);
      double d2 = -1.0;
      std::size_t i2 = i1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double di = space.dist(best, pts[i]);
        if (i != i1 && di > d2) {
          d2 = di;
          i2 = i;
        }
      }
      targets.push_back(space.geodesic(pts[i1], pts[i2], 0.5));
    }
    bool improved = false;
    for (const auto& target : targets) {
      if (space.dist(best, target) == 0.0) continue;
      const Point cand = space.geodesic(best, target, step);
      const double f = max_radius(space, cand, pts);
      if (f < best_f - noise) {
        best_f = f;
        best = cand;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

/// Minimizer of z -> max over the tail of rho(z, x_k), a finite-window proxy
/// for the asymptotic center. Restarts from up to 16 tail points.
inline Point asymptotic_center(const Space& space, const std::vector<Point>& points, double tail_fraction = 0.5) {
  const std::vector<Point> tail = tail_window(points, tail_fraction);
  if (tail.size() < 2) raise(Errc::empty_tail, "asymptotic center needs at least two tail points");
  for (const auto& p : tail) require_member(space, p);
  const std::size_t stride = std::max<std::size_t>(1, tail.size() / 16);
  Point best = tail.front();
  double best_f = max_radius(space, best, tail);
  for (std::size_t i = 0; i < tail.size(); i += stride) {
    Point c = detail::minimize_max_radius(space, tail, tail[i]);
    const double f = max_radius(space, c, tail);
    if (f < best_f) {
      best_f = f;
      best = std::move(c);
    }
  }
  return best;
}

struct DeltaReport {
  static constexpr const char* banner = "finite-sample proxy: diagnoses, does not certify, Delta-convergence";
  Point center;
  double center_radius = 0.0;           // max tail distance from the center
  double center_to_candidate = 0.0;
  bool bounded = true;
  double anchor_spread = 0.0;           // oscillation of rho(x_k, anchor) over the tail
  bool kadec_klee_stable = false;
  double fejer_max_increase = 0.0;      // of rho(x_k, candidate) along the tail
  bool fejer = false;
  std::optional<double> center_residual;  // rho(center, J_1 center), when a field is given
  bool pass = false;
};

struct DeltaCheckOptions {
  double pass_tol = 1e-4;
  double fejer_slack = 1e-7;
  double stability_tol = 1e-6;
};

/// Delta-convergence diagnostics for a trajectory tail against a candidate limit.
inline DeltaReport delta_convergence_check(const Space& space, const std::vector<Point>& tail, const Point& candidate,
                                           const MonotoneField* field = nullptr,
                                           std::optional<Point> anchor = std::nullopt, DeltaCheckOptions opt = {}) {
  if (tail.size() < 2) raise(Errc::empty_tail, "delta check needs at least two tail points");
  require_member(space, candidate, "candidate");
  DeltaReport rep;
  for (const auto& p : tail) {
    if (!std::isfinite(space.dist(candidate, p))) rep.bounded = false;
  }
  if (!rep.bounded) raise(Errc::domain_error, "tail is unbounded");
  rep.center = asymptotic_center(space, tail, 1.0);
  rep.center_radius = max_radius(space, rep.center, tail);
  rep.center_to_candidate = space.dist(rep.center, candidate);
  const Point& a = anchor ? *anchor : candidate;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : tail) {
    const double d = space.dist(p, a);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  rep.anchor_spread = hi - lo;
  rep.kadec_klee_stable = rep.anchor_spread <= opt.stability_tol;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    rep.fejer_max_increase =
        std::max(rep.fejer_max_increase, space.dist(tail[i], candidate) - space.dist(tail[i - 1], candidate));
  }
  rep.fejer = rep.fejer_max_increase <= opt.fejer_slack;
  if (field) rep.center_residual = space.dist(rep.center, resolvent(*field, 1.0, rep.center));
  rep.pass = rep.center_to_candidate <= opt.pass_tol;
  return rep;
}

}  // namespace hadamard
