#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hadamard/space.hpp"
#include "hadamard/spaces/coords_text.hpp"

namespace hadamard {

/// Flat space R^n.
class EuclideanSpace final : public Space, private ManifoldChart {
 public:
  explicit EuclideanSpace(std::size_t dim, double sample_radius = 2.0)
      : dim_(dim), sample_radius_(sample_radius) {
    if (dim == 0) raise(Errc::invalid_spec, "Euclidean dimension must be at least 1");
  }

  std::size_t dim() const noexcept { return dim_; }

  Point make_point(std::vector<double> coords) const {
    if (coords.size() != dim_) raise(Errc::domain_error, "wrong coordinate count for " + describe());
    if (!valid_coords(coords)) raise(Errc::domain_error, "non-finite coordinate");
    return Point(id(), std::move(coords));
  }

  SpaceKind kind() const noexcept override { return SpaceKind::euclidean; }
  std::string describe() const override { return "R^" + std::to_string(dim_); }
  std::size_t coord_count() const noexcept override { return dim_; }

  bool valid_coords(std::span<const double> c) const override {
    if (c.size() != dim_) return false;
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double dist(const Point& p, const Point& q) const override {
    // Scaled accumulation keeps tiny and huge separations accurate.
    double scale = 0.0, ssq = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double d = std::abs(p[i] - q[i]);
      if (d == 0.0) continue;
      if (scale < d) {
        ssq = 1.0 + ssq * (scale / d) * (scale / d);
        scale = d;
      } else {
        ssq += (d / scale) * (d / scale);
      }
    }
    return scale * std::sqrt(ssq);
  }

  Point geodesic(const Point& p, const Point& q, double t) const override { return affine(p, q, t); }
  Point extend(const Point& p, const Point& q, double s) const override { return affine(p, q, s); }

  std::optional<double> exact_angle(const Point& p, const Point& x, const Point& y) const override {
    std::vector<double> u(dim_), v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      u[i] = x[i] - p[i];
      v[i] = y[i] - p[i];
    }
    return vector_angle(u, v);
  }

  Point sample(Rng& rng) const override {
    std::vector<double> c(dim_);
    for (double& v : c) v = rng.uniform(-sample_radius_, sample_radius_);
    return Point(id(), std::move(c));
  }

  Point project(const ConvexSet& set, const Point& x) const override {
    if (const auto* b = set.as<Ball>()) return project_ball(*b, x);
    if (const auto* h = set.as<HalfSpace>()) {
      if (h->normal.size() != dim_) raise(Errc::invalid_spec, "halfspace normal has wrong dimension");
      const double nn = std::inner_product(h->normal.begin(), h->normal.end(), h->normal.begin(), 0.0);
      if (!(nn > 0.0)) raise(Errc::invalid_spec, "halfspace normal must be nonzero");
      double dot = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) dot += h->normal[i] * x[i];
      if (dot <= h->offset) return x;
      std::vector<double> c(x.coords().begin(), x.coords().end());
      const double k = (dot - h->offset) / nn;
      for (std::size_t i = 0; i < dim_; ++i) c[i] -= k * h->normal[i];
      return Point(id(), std::move(c));
    }
    if (const auto* s = set.as<Segment>()) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double e = s->q[i] - s->p[i];
        num += (x[i] - s->p[i]) * e;
        den += e * e;
      }
      if (den == 0.0) return s->p;
      const double t = std::clamp(num / den, 0.0, 1.0);
      if (t == 0.0) return s->p;
      if (t == 1.0) return s->q;
      return affine(s->p, s->q, t);
    }
    unsupported_set(*this, set);
  }

  std::string format(const Point& p) const override {
    return detail::join_doubles(std::vector<double>(p.coords().begin(), p.coords().end()));
  }

  Point parse(std::string_view text) const override { return make_point(detail::parse_double_list(text)); }

  const ManifoldChart* chart() const noexcept override { return this; }

  /// Angle between two vectors via 2 atan2(|a^ - b^|, |a^ + b^|), accurate at 0 and pi.
  static double vector_angle(const std::vector<double>& u, const std::vector<double>& v) {
    const double nu = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
    const double nv = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = u[i] / nu, b = v[i] / nv;
      diff += (a - b) * (a - b);
      sum += (a + b) * (a + b);
    }
    return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
  }

 private:
  std::size_t tangent_dim() const override { return dim_; }

  Point exp(const Point& base, std::span<const double> v) const override {
    std::vector<double> c(base.coords().begin(), base.coords().end());
    for (std::size_t i = 0; i < dim_; ++i) c[i] += v[i];
    return Point(id(), std::move(c));
  }

  Point affine(const Point& p, const Point& q, double t) const {
    std::vector<double> c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = p[i] + t * (q[i] - p[i]);
    return Point(id(), std::move(c));
  }

  std::size_t dim_;
  double sample_radius_;
};

}  // namespace hadamard
