#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hadamard/space.hpp"
#include "hadamard/spaces/coords_text.hpp"

namespace hadamard {

/// Hyperbolic space H^n in the hyperboloid model: points x in R^{n+1} with
/// <x,x> = -1 and x_n > 0 under the Minkowski form <x,y> = sum_{i<n} x_i y_i - x_n y_n.
class HyperbolicSpace final : public Space, private ManifoldChart {
 public:
  explicit HyperbolicSpace(std::size_t dim, double sample_radius = 2.0)
      : dim_(dim), sample_radius_(sample_radius) {
    if (dim == 0) raise(Errc::invalid_spec, "hyperbolic dimension must be at least 1");
  }

  std::size_t dim() const noexcept { return dim_; }

  /// Lifts spatial coordinates (x_0..x_{n-1}) onto the upper sheet.
  Point lift(std::vector<double> spatial) const {
    if (spatial.size() != dim_) raise(Errc::domain_error, "wrong coordinate count for " + describe());
    spatial.push_back(0.0);
    return normalized(std::move(spatial));
  }

  Point origin() const { return lift(std::vector<double>(dim_, 0.0)); }

  /// Minkowski bilinear form on ambient vectors.
  double minkowski(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += a[i] * b[i];
    return s - a[dim_] * b[dim_];
  }

  SpaceKind kind() const noexcept override { return SpaceKind::hyperbolic; }
  std::string describe() const override { return "H^" + std::to_string(dim_); }
  std::size_t coord_count() const noexcept override { return dim_ + 1; }

  bool valid_coords(std::span<const double> c) const override {
    if (c.size() != dim_ + 1) return false;
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
    if (!(c[dim_] > 0.0)) return false;
    const double form = minkowski(c, c);
    return std::abs(form + 1.0) <= 1e-10 * (1.0 + c[dim_] * c[dim_]);
  }

  double dist(const Point& p, const Point& q) const override {
    // 2 asinh(|q - p|_M / 2) avoids the cancellation of acosh(-<p,q>) near 0.
    const double m = chord_sq(p, q);
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, m)));
  }

  Point geodesic(const Point& p, const Point& q, double t) const override { return along(p, q, t); }
  Point extend(const Point& p, const Point& q, double s) const override { return along(p, q, s); }

  std::optional<double> exact_angle(const Point& p, const Point& x, const Point& y) const override {
    const auto u = initial_velocity(p, x);
    const auto v = initial_velocity(p, y);
    const double nu = std::sqrt(std::max(0.0, minkowski(u, u)));
    const double nv = std::sqrt(std::max(0.0, minkowski(v, v)));
    std::vector<double> diff(dim_ + 1), sum(dim_ + 1);
    for (std::size_t i = 0; i <= dim_; ++i) {
      diff[i] = u[i] / nu - v[i] / nv;
      sum[i] = u[i] / nu + v[i] / nv;
    }
    return 2.0 * std::atan2(std::sqrt(std::max(0.0, minkowski(diff, diff))),
                            std::sqrt(std::max(0.0, minkowski(sum, sum))));
  }

  Point sample(Rng& rng) const override {
    std::vector<double> dir(dim_);
    double norm = 0.0;
    while (norm < 1e-12) {
      norm = 0.0;
      for (double& v : dir) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
    }
    const double r = rng.uniform(0.0, sample_radius_);
    std::vector<double> c(dim_ + 1);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = std::sinh(r) * dir[i] / norm;
    return normalized(std::move(c));
  }

  Point project(const ConvexSet& set, const Point& x) const override {
    if (const auto* b = set.as<Ball>()) return project_ball(*b, x);
    if (const auto* s = set.as<Segment>()) {
      const double len = dist(s->p, s->q);
      if (len == 0.0) return s->p;
      // Foot of the perpendicular: tanh(s*) = <x,u> / (-<x,p>) for the unit
      // tangent u of the geodesic at p.
      auto u = initial_velocity(s->p, s->q);
      const double nu = std::sqrt(minkowski(u, u));
      for (double& v : u) v /= nu;
      const double ratio = minkowski(x.coords(), u) / -minkowski(x.coords(), s->p.coords());
      const double foot = std::atanh(std::clamp(ratio, -1.0, 1.0));
      const double arc = std::clamp(foot, 0.0, len);
      if (arc == 0.0) return s->p;
      if (arc == len) return s->q;
      return along(s->p, s->q, arc / len);
    }
    unsupported_set(*this, set);
  }

  std::string format(const Point& p) const override {
    return detail::join_doubles(std::vector<double>(p.coords().begin(), p.coords().begin() + dim_));
  }

  Point parse(std::string_view text) const override { return lift(detail::parse_double_list(text)); }

  const ManifoldChart* chart() const noexcept override { return this; }

 private:
  std::size_t tangent_dim() const override { return dim_; }

  Point exp(const Point& base, std::span<const double> v) const override {
    const auto frame = orthonormal_frame(base);
    std::vector<double> w(dim_ + 1, 0.0);
    for (std::size_t k = 0; k < dim_; ++k) {
      for (std::size_t i = 0; i <= dim_; ++i) w[i] += v[k] * frame[k][i];
    }
    const double n = std::sqrt(std::max(0.0, minkowski(w, w)));
    if (n == 0.0) return base;
    std::vector<double> c(dim_ + 1);
    const double ch = 2.0 * std::sinh(0.5 * n) * std::sinh(0.5 * n);
    const double sh = std::sinh(n) / n;
    for (std::size_t i = 0; i <= dim_; ++i) c[i] = base[i] + ch * base[i] + sh * w[i];
    return normalized(std::move(c));
  }

  std::vector<std::vector<double>> orthonormal_frame(const Point& p) const {
    std::vector<std::vector<double>> frame;
    for (std::size_t k = 0; k < dim_; ++k) {
      std::vector<double> b(dim_ + 1, 0.0);
      b[k] = 1.0;
      // Project onto T_p: b + <b,p> p.
      const double bp = minkowski(b, p.coords());
      for (std::size_t i = 0; i <= dim_; ++i) b[i] += bp * p[i];
      for (const auto& f : frame) {
        const double proj = minkowski(b, f);
        for (std::size_t i = 0; i <= dim_; ++i) b[i] -= proj * f[i];
      }
      const double n = std::sqrt(minkowski(b, b));
      for (double& v : b) v /= n;
      frame.push_back(std::move(b));
    }
    return frame;
  }

  double chord_sq(const Point& p, const Point& q) const {
    std::vector<double> d(dim_ + 1);
    for (std::size_t i = 0; i <= dim_; ++i) d[i] = q[i] - p[i];
    return minkowski(d, d);
  }

  /// q + <p,q> p, the (unnormalized, length sinh d) initial velocity toward q.
  std::vector<double> initial_velocity(const Point& p, const Point& q) const {
    const double m = chord_sq(p, q);
    std::vector<double> w(dim_ + 1);
    for (std::size_t i = 0; i <= dim_; ++i) w[i] = (q[i] - p[i]) - 0.5 * m * p[i];
    return w;
  }

  Point along(const Point& p, const Point& q, double s) const {
    const double d = dist(p, q);
    if (d == 0.0) return p;
    const auto w = initial_velocity(p, q);
    const double sd = s * d;
    const double ch = 2.0 * std::sinh(0.5 * sd) * std::sinh(0.5 * sd);
    const double sh = std::sinh(sd) / std::sinh(d);
    std::vector<double> c(dim_ + 1);
    for (std::size_t i = 0; i <= dim_; ++i) c[i] = p[i] + ch * p[i] + sh * w[i];
    return normalized(std::move(c));
  }

  /// Restores <x,x> = -1 by recomputing the time coordinate from the spatial part.
  Point normalized(std::vector<double> c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += c[i] * c[i];
    c[dim_] = std::sqrt(1.0 + s);
    return Point(id(), std::move(c));
  }

  std::size_t dim_;
  double sample_radius_;
};

}  // namespace hadamard
