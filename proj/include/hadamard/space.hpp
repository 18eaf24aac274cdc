#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hadamard/convex_set.hpp"
#include "hadamard/error.hpp"
#include "hadamard/point.hpp"
#include "hadamard/random.hpp"

namespace hadamard {

enum class SpaceKind { euclidean, hyperbolic, tree, product };

constexpr std::string_view to_string(SpaceKind k) noexcept {
  switch (k) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::hyperbolic: return "hyperbolic";
    case SpaceKind::tree: return "tree";
    case SpaceKind::product: return "product";
  }
  return "unknown";
}

/// Exponential-map chart for spaces that are Riemannian manifolds. Tangent
/// vectors are coordinates in an orthonormal frame at the base point.
class ManifoldChart {
 public:
  virtual ~ManifoldChart() = default;
  virtual std::size_t tangent_dim() const = 0;
  virtual Point exp(const Point& base, std::span<const double> v) const = 0;
};

/// A complete CAT(0) model space.
///
/// The virtual primitives assume their arguments already belong to this space;
/// the checked entry points live in geometry.hpp. Implementations are
/// immutable after construction and safe to share across threads.
class Space {
 public:
  Space() : id_(next_id()) {}
  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;
  virtual ~Space() = default;

  SpaceId id() const noexcept { return id_; }

  virtual SpaceKind kind() const noexcept = 0;
  virtual std::string describe() const = 0;
  virtual std::size_t coord_count() const noexcept = 0;

  /// Membership predicate on coordinates (the space tag is checked separately).
  virtual bool valid_coords(std::span<const double> coords) const = 0;

  virtual double dist(const Point& p, const Point& q) const = 0;

  /// Point at parameter t of the normalized geodesic from p to q.
  virtual Point geodesic(const Point& p, const Point& q, double t) const = 0;

  /// eta(s) for the fixed extension eta of the geodesic with eta(0)=p, eta(1)=q.
  /// Throws Errc::no_extension when the space cannot continue the geodesic.
  virtual Point extend(const Point& p, const Point& q, double s) const = 0;

  /// Length by which the geodesic from q through p can be continued past p
  /// (the room available for a negative direction at p). Infinite in manifolds.
  virtual double extension_room(const Point& /*p*/, const Point& /*q*/) const {
    return std::numeric_limits<double>::infinity();
  }

  /// Closed-form Alexandrov angle at p between the geodesics toward x and y,
  /// when the space has one. x, y differ from p.
  virtual std::optional<double> exact_angle(const Point& p, const Point& x, const Point& y) const = 0;

  virtual Point sample(Rng& rng) const = 0;

  /// Metric projection onto a closed convex set.
  virtual Point project(const ConvexSet& set, const Point& x) const = 0;

  virtual std::string format(const Point& p) const = 0;
  virtual Point parse(std::string_view text) const = 0;

  virtual const ManifoldChart* chart() const noexcept { return nullptr; }

  bool owns(const Point& p) const { return p.space_id() == id_; }

  /// Nearest-point map onto a ball; valid in any geodesic space.
  Point project_ball(const Ball& ball, const Point& x) const {
    const double r = dist(ball.center, x);
    if (r <= ball.radius) return x;
    return geodesic(ball.center, x, ball.radius / r);
  }

  /// Nearest point of the segment [a, b] to x for spaces without a closed
  /// form: golden-section bracketing of t -> rho^2(x, gamma(t)) followed by
  /// parabolic refinement on the final bracket.
  Point project_segment_numeric(const Segment& seg, const Point& x) const {
    const double len = dist(seg.p, seg.q);
    if (len == 0.0) return seg.p;
    auto f = [&](double t) {
      const double d = dist(x, geodesic(seg.p, seg.q, t));
      return d * d;
    };
    constexpr double inv_phi = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-12) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = f(d);
      }
      if (hi - lo < 1e-4) break;
    }
    // The bracket is small enough that f is well approximated by a parabola;
    // fit through widely spaced nodes to avoid the sqrt(eps) flat-minimum limit.
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      const double h = std::max(1e-6, 0.5 * (hi - lo));
      const double a = std::max(0.0, t - h), b = std::min(1.0, t + h);
      const double m = 0.5 * (a + b);
      const double fa = f(a), fm = f(m), fb = f(b);
      const double denom = fa - 2.0 * fm + fb;
      if (!(denom > 0.0)) break;
      const double step = 0.5 * (b - a) * 0.5 * (fa - fb) / denom;
      const double next = std::clamp(m + step, 0.0, 1.0);
      if (std::abs(next - t) < 1e-15) {
        t = next;
        break;
      }
      t = next;
      lo = std::max(0.0, t - 0.25 * h);
      hi = std::min(1.0, t + 0.25 * h);
    }
    for (double end : {0.0, 1.0}) {
      if (f(end) < f(t)) t = end;
    }
    return geodesic(seg.p, seg.q, t);
  }

 private:
  static SpaceId next_id() {
    static std::atomic<SpaceId> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  SpaceId id_;
};

using SpaceHandle = std::shared_ptr<const Space>;

[[noreturn]] inline void unsupported_set(const Space& space, const ConvexSet& set) {
  raise(Errc::unsupported_set, "set kind '" + set.kind_name() + "' is not implemented for " +
                                   std::string(to_string(space.kind())) + " spaces");
}

}  // namespace hadamard
