#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "hadamard/space.hpp"

namespace hadamard {

inline void require_member(const Space& space, const Point& p, const char* what = "point") {
  if (!space.owns(p)) {
    raise(Errc::space_mismatch, std::string(what) + " is not tagged with " + space.describe());
  }
}

inline double distance(const Space& space, const Point& p, const Point& q) {
  require_member(space, p);
  require_member(space, q);
  return space.dist(p, q);
}

inline Point geodesic_point(const Space& space, const Point& p, const Point& q, double t) {
  require_member(space, p);
  require_member(space, q);
  if (!(t >= 0.0 && t <= 1.0)) raise(Errc::domain_error, "geodesic parameter outside [0,1]");
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  return space.geodesic(p, q, t);
}

/// eta(s) on the space's fixed extension of the geodesic through p (s=0) and x (s=1).
inline Point extend_geodesic(const Space& space, const Point& p, const Point& x, double s) {
  require_member(space, p);
  require_member(space, x);
  if (space.dist(p, x) == 0.0) raise(Errc::domain_error, "cannot extend a zero geodesic");
  if (s >= 0.0 && s <= 1.0) return geodesic_point(space, p, x, s);
  return space.extend(p, x, s);
}

/// The normalized geodesic between two points; eval(t) for t in [0, 1].
class GeodesicSegment {
 public:
  GeodesicSegment(SpaceHandle space, Point start, Point end)
      : space_(std::move(space)), start_(std::move(start)), end_(std::move(end)) {
    length_ = distance(*space_, start_, end_);
  }

  const Point& start() const noexcept { return start_; }
  const Point& end() const noexcept { return end_; }
  double length() const noexcept { return length_; }
  const SpaceHandle& space() const noexcept { return space_; }

  Point eval(double t) const { return geodesic_point(*space_, start_, end_, t); }

 private:
  SpaceHandle space_;
  Point start_;
  Point end_;
  double length_ = 0.0;
};

enum class AngleMethod { exact_closed_form, comparison_limit_extrapolated };

struct AngleResult {
  double radians = 0.0;
  AngleMethod method = AngleMethod::exact_closed_form;
  double estimated_error = 0.0;
};

inline double clamp_angle(double a) { return std::clamp(a, 0.0, std::numbers::pi); }

namespace detail {

// Angle between sides a and b opposite side c.  Kahan's half-angle form; acos
// of the cosine rule loses half the digits near 0 and pi.
inline double triangle_angle(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  // Distances that round a few ulps off a degenerate triangle would otherwise
  // move the angle by sqrt(eps).
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (a + b + c);
  if (c >= a + b - slack) return std::numbers::pi;
  if (c <= a - b + slack) return 0.0;
  const double mu = b >= c ? c - (a - b) : b - (a - c);
  const double num = ((a - b) + c) * std::max(mu, 0.0);
  const double den = (a + (b + c)) * ((a - c) + b);
  if (den <= 0.0) return std::numbers::pi;
  return clamp_angle(2.0 * std::atan(std::sqrt(num / den)));
}

}  // namespace detail

/// Angle at p of the Euclidean comparison triangle for (p, q, r), with the
/// conventions 0 for p = q = r and pi/2 when exactly one of q, r equals p.
inline AngleResult comparison_angle(const Space& space, const Point& p, const Point& q, const Point& r) {
  const double a = distance(space, p, q);
  const double b = distance(space, p, r);
  const double c = distance(space, q, r);
  if (a == 0.0 && b == 0.0) return {0.0, AngleMethod::exact_closed_form, 0.0};
  if (a == 0.0 || b == 0.0) return {std::numbers::pi / 2, AngleMethod::exact_closed_form, 0.0};
  return {detail::triangle_angle(a, b, c), AngleMethod::exact_closed_form, 0.0};
}

struct NumericAngleOptions {
  double initial_fraction = 1e-2;
  double ratio = 0.5;
  int levels = 8;
};

/// Limit of comparison angles between points at arc length s along the two
/// geodesics, over a geometric grid in s with Richardson extrapolation of the
/// last two levels (comparison-angle defects are O(s^2) in smooth models and
/// vanish in trees).
inline AngleResult numeric_alexandrov_angle(const Space& space, const Point& p, const Point& x,
                                            const Point& y, NumericAngleOptions opt = {}) {
  const double dx = distance(space, p, x);
  const double dy = distance(space, p, y);
  if (dx == 0.0 || dy == 0.0) raise(Errc::zero_direction, "Alexandrov angle needs nonzero directions");
  double s = opt.initial_fraction * std::min(dx, dy);
  double prev = 0.0, last = 0.0;
  for (int level = 0; level < opt.levels; ++level) {
    const Point xs = space.geodesic(p, x, s / dx);
    const Point ys = space.geodesic(p, y, s / dy);
    prev = last;
    last = comparison_angle(space, p, xs, ys).radians;
    s *= opt.ratio;
  }
  const double r2 = opt.ratio * opt.ratio;
  const double extrapolated = (last - r2 * prev) / (1.0 - r2);
  return {clamp_angle(extrapolated), AngleMethod::comparison_limit_extrapolated, std::abs(last - prev)};
}

inline AngleResult alexandrov_angle(const Space& space, const Point& p, const Point& x, const Point& y) {
  if (distance(space, p, x) == 0.0 || distance(space, p, y) == 0.0) {
    raise(Errc::zero_direction, "Alexandrov angle needs nonzero directions");
  }
  if (auto exact = space.exact_angle(p, x, y)) {
    return {clamp_angle(*exact), AngleMethod::exact_closed_form, 0.0};
  }
  return numeric_alexandrov_angle(space, p, x, y);
}

/// <t p->x, s p->y> = (ts/2)[rho^2(p,x) + rho^2(p,y) - rho^2(x,y)].
inline double quasi_inner(const Space& space, const Point& p, const Point& x, const Point& y,
                          double t = 1.0, double s = 1.0) {
  const double a = distance(space, p, x);
  const double b = distance(space, p, y);
  const double c = distance(space, x, y);
  return 0.5 * t * s * (a * a + b * b - c * c);
}

/// RHS - LHS of the (CN) inequality along `geodesic` against v.
inline double cn_residual(const GeodesicSegment& geodesic, const Point& v, double t) {
  const Space& space = *geodesic.space();
  if (!(t >= 0.0 && t <= 1.0)) raise(Errc::domain_error, "CN parameter outside [0,1]");
  const double d0 = distance(space, geodesic.start(), v);
  const double d1 = distance(space, geodesic.end(), v);
  const double dt = distance(space, geodesic.eval(t), v);
  const double len = geodesic.length();
  return (1.0 - t) * d0 * d0 + t * d1 * d1 - t * (1.0 - t) * len * len - dt * dt;
}

inline double cn_residual(const Space& space, const GeodesicSegment& geodesic, const Point& v, double t) {
  if (geodesic.space().get() != &space) raise(Errc::space_mismatch, "segment belongs to another space");
  return cn_residual(geodesic, v, t);
}

/// RHS - LHS of rho^2(x,v) + rho^2(y,u) <= rho^2(x,u) + rho^2(y,v) + 2 rho(x,y) rho(u,v).
inline double quad_residual(const Space& space, const Point& x, const Point& y, const Point& u,
                            const Point& v) {
  auto sq = [&](const Point& a, const Point& b) {
    const double d = distance(space, a, b);
    return d * d;
  };
  return sq(x, u) + sq(y, v) + 2.0 * distance(space, x, y) * distance(space, u, v) - sq(x, v) - sq(y, u);
}

}  // namespace hadamard
