#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hadamard/space.hpp"
#include "hadamard/spaces/coords_text.hpp"

namespace hadamard {

/// l2 product X1 x X2 with rho^2 = rho1^2 + rho2^2. Coordinates are the
/// concatenation of the factor coordinates.
class ProductSpace final : public Space, private ManifoldChart {
 public:
  ProductSpace(SpaceHandle first, SpaceHandle second) : first_(std::move(first)), second_(std::move(second)) {
    if (!first_ || !second_) raise(Errc::invalid_spec, "product factors must be non-null");
  }

  const Space& first() const noexcept { return *first_; }
  const Space& second() const noexcept { return *second_; }
  const SpaceHandle& first_handle() const noexcept { return first_; }
  const SpaceHandle& second_handle() const noexcept { return second_; }

  Point left(const Point& p) const {
    auto c = p.coords();
    return Point(first_->id(), std::vector<double>(c.begin(), c.begin() + n1()));
  }

  Point right(const Point& p) const {
    auto c = p.coords();
    return Point(second_->id(), std::vector<double>(c.begin() + n1(), c.end()));
  }

  Point make_point(const Point& a, const Point& b) const {
    if (!first_->owns(a) || !second_->owns(b)) raise(Errc::space_mismatch, "factor point from another space");
    std::vector<double> c(a.coords().begin(), a.coords().end());
    c.insert(c.end(), b.coords().begin(), b.coords().end());
    return Point(id(), std::move(c));
  }

  SpaceKind kind() const noexcept override { return SpaceKind::product; }
  std::string describe() const override { return first_->describe() + " x " + second_->describe(); }
  std::size_t coord_count() const noexcept override { return n1() + second_->coord_count(); }

  bool valid_coords(std::span<const double> c) const override {
    if (c.size() != coord_count()) return false;
    return first_->valid_coords(c.subspan(0, n1())) && second_->valid_coords(c.subspan(n1()));
  }

  double dist(const Point& p, const Point& q) const override {
    return std::hypot(first_->dist(left(p), left(q)), second_->dist(right(p), right(q)));
  }

  Point geodesic(const Point& p, const Point& q, double t) const override {
    return make_point(first_->geodesic(left(p), left(q), t), second_->geodesic(right(p), right(q), t));
  }

  Point extend(const Point& p, const Point& q, double s) const override {
    auto part = [s](const Space& f, const Point& a, const Point& b) { return a == b ? a : f.extend(a, b, s); };
    return make_point(part(*first_, left(p), left(q)), part(*second_, right(p), right(q)));
  }

  double extension_room(const Point& p, const Point& q) const override {
    const double d = dist(p, q);
    if (d == 0.0) return 0.0;
    double ratio = std::numeric_limits<double>::infinity();
    const double d1 = first_->dist(left(p), left(q)), d2 = second_->dist(right(p), right(q));
    if (d1 > 0.0) ratio = std::min(ratio, first_->extension_room(left(p), left(q)) / d1);
    if (d2 > 0.0) ratio = std::min(ratio, second_->extension_room(right(p), right(q)) / d2);
    return d * ratio;
  }

  /// Angles in a product: cos a = (d1x d1y cos a1 + d2x d2y cos a2) / (dx dy).
  std::optional<double> exact_angle(const Point& p, const Point& x, const Point& y) const override {
    double num = 0.0;
    const Point pl = left(p), pr = right(p);
    const Point xl = left(x), xr = right(x), yl = left(y), yr = right(y);
    const double d1x = first_->dist(pl, xl), d1y = first_->dist(pl, yl);
    const double d2x = second_->dist(pr, xr), d2y = second_->dist(pr, yr);
    if (d1x > 0.0 && d1y > 0.0) {
      auto a = first_->exact_angle(pl, xl, yl);
      if (!a) return std::nullopt;
      num += d1x * d1y * std::cos(*a);
    }
    if (d2x > 0.0 && d2y > 0.0) {
      auto a = second_->exact_angle(pr, xr, yr);
      if (!a) return std::nullopt;
      num += d2x * d2y * std::cos(*a);
    }
    const double den = std::hypot(d1x, d2x) * std::hypot(d1y, d2y);
    return std::acos(std::clamp(num / den, -1.0, 1.0));
  }

  Point sample(Rng& rng) const override {
    Point a = first_->sample(rng);
    Point b = second_->sample(rng);
    return make_point(a, b);
  }

  Point project(const ConvexSet& set, const Point& x) const override {
    if (const auto* ps = set.as<ProductSet>()) {
      return make_point(first_->project(*ps->first, left(x)), second_->project(*ps->second, right(x)));
    }
    if (const auto* b = set.as<Ball>()) return project_ball(*b, x);
    if (const auto* s = set.as<Segment>()) return project_segment_numeric(*s, x);
    unsupported_set(*this, set);
  }

  std::string format(const Point& p) const override {
    return "(" + first_->format(left(p)) + ")|(" + second_->format(right(p)) + ")";
  }

  /// "(<left>)|(<right>)"; parentheses may be omitted when the left factor
  /// text contains no '|'.
  Point parse(std::string_view text) const override {
    text = detail::trim(text);
    std::size_t split = std::string_view::npos;
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      else if (text[i] == ')') --depth;
      else if (text[i] == '|' && depth == 0) {
        split = i;
        break;
      }
    }
    if (split == std::string_view::npos) raise(Errc::config_error, "product point must look like (left)|(right)");
    auto strip = [](std::string_view s) {
      s = detail::trim(s);
      if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
      return s;
    };
    return make_point(first_->parse(strip(text.substr(0, split))), second_->parse(strip(text.substr(split + 1))));
  }

  const ManifoldChart* chart() const noexcept override {
    return first_->chart() && second_->chart() ? this : nullptr;
  }

 private:
  std::size_t n1() const noexcept { return first_->coord_count(); }

  std::size_t tangent_dim() const override {
    return first_->chart()->tangent_dim() + second_->chart()->tangent_dim();
  }

  Point exp(const Point& base, std::span<const double> v) const override {
    const std::size_t k = first_->chart()->tangent_dim();
    return make_point(first_->chart()->exp(left(base), v.subspan(0, k)),
                      second_->chart()->exp(right(base), v.subspan(k)));
  }

  SpaceHandle first_;
  SpaceHandle second_;
};

}  // namespace hadamard
