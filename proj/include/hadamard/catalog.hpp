#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "hadamard/fields.hpp"

namespace hadamard {

namespace detail {

inline Point toward(const Space& space, const Point& x, const Point& target, double lambda) {
  return geodesic_point(space, x, target, lambda / (1.0 + lambda));
}

/// Whether argmin_C [1/2 rho^2(., a) + rho^2(., x)/(2 lambda)] = P_C(gamma_{x,a}(lambda/(1+lambda))).
/// Holds in R^n (isotropic quadratic), in trees (the gate of the minimizer lies
/// on the geodesic to every point of C) and in products of such with product sets.
inline bool composite_prox_is_exact(const Space& space, const ConvexSet& set) {
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::tree: return true;
    case SpaceKind::hyperbolic: return false;
    case SpaceKind::product: {
      const auto* ps = set.as<ProductSet>();
      const auto& prod = static_cast<const ProductSpace&>(space);
      return ps && composite_prox_is_exact(prod.first(), *ps->first) &&
             composite_prox_is_exact(prod.second(), *ps->second);
    }
  }
  return false;
}

/// |d(1/2 rho^2(., a) + i_C)(x)| for x in C where a closed form is known: the
/// norm of the projection of the direction toward a onto the tangent cone of C.
inline std::optional<double> composite_min_norm(const Space& space, const Point& a, const ConvexSet& set,
                                                const Point& x) {
  constexpr double eps = 1e-12;
  if (space.dist(x, space.project(set, x)) > 1e-9) return kInfinity;
  switch (space.kind()) {
    case SpaceKind::tree: {
      // Inside a convex subset of a tree the direction toward a leaves C only at P_C(a).
      return space.dist(x, space.project(set, a)) == 0.0 ? 0.0 : space.dist(x, a);
    }
    case SpaceKind::euclidean: {
      const std::size_t n = space.coord_count();
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = a[i] - x[i];
      auto norm = [](const std::vector<double>& u) {
        double s = 0.0;
        for (double c : u) s += c * c;
        return std::sqrt(s);
      };
      auto cut = [&](std::vector<double> nu) {
        const double nn = norm(nu);
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += w[i] * nu[i] / nn;
        if (dot <= 0.0) return norm(w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= dot * nu[i] / nn;
        return norm(w);
      };
      if (const auto* b = set.as<Ball>()) {
        const double r = space.dist(x, b->center);
        if (r < b->radius - eps || r == 0.0) return norm(w);
        std::vector<double> nu(n);
        for (std::size_t i = 0; i < n; ++i) nu[i] = x[i] - b->center[i];
        return cut(nu);
      }
      if (const auto* h = set.as<HalfSpace>()) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += h->normal[i] * x[i];
        if (dot < h->offset - eps) return norm(w);
        return cut(h->normal);
      }
      if (const auto* s = set.as<Segment>()) {
        const double len = space.dist(s->p, s->q);
        if (len == 0.0) return 0.0;
        double along = 0.0;
        for (std::size_t i = 0; i < n; ++i) along += w[i] * (s->q[i] - s->p[i]) / len;
        if (space.dist(x, s->p) <= eps) return std::max(0.0, along);
        if (space.dist(x, s->q) <= eps) return std::max(0.0, -along);
        return std::abs(along);
      }
      return std::nullopt;
    }
    case SpaceKind::product: {
      const auto* ps = set.as<ProductSet>();
      if (!ps) return std::nullopt;
      const auto& prod = static_cast<const ProductSpace&>(space);
      auto l = composite_min_norm(prod.first(), prod.left(a), *ps->first, prod.left(x));
      auto r = composite_min_norm(prod.second(), prod.right(a), *ps->second, prod.right(x));
      if (!l || !r) return std::nullopt;
      return std::hypot(*l, *r);
    }
    case SpaceKind::hyperbolic: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// F = 1/2 rho^2(., a). prox_lambda x = gamma_{x,a}(lambda/(1+lambda)), |dF(x)| = rho(x, a).
inline ConvexFunctional quadratic_functional(SpaceHandle space, Point a) {
  require_member(*space, a, "anchor");
  ConvexFunctional F;
  F.space = space;
  F.eval = [space, a](const Point& y) {
    const double d = space->dist(y, a);
    return 0.5 * d * d;
  };
  F.prox = [space, a](double lambda, const Point& x, const SolverTolerance&) {
    return detail::toward(*space, x, a, lambda);
  };
  F.min_norm = [space, a](const Point& x) { return space->dist(x, a); };
  F.argmin = Region::point(a);
  return F;
}

/// Indicator of C: prox = P_C for every lambda.
inline ConvexFunctional indicator_functional(SpaceHandle space, ConvexSet set) {
  ConvexFunctional F;
  F.space = space;
  F.eval = [space, set](const Point& y) {
    return space->dist(y, space->project(set, y)) <= 1e-9 ? 0.0 : detail::kInfinity;
  };
  F.prox = [space, set](double, const Point& x, const SolverTolerance&) { return space->project(set, x); };
  F.domain_set = set;
  F.smooth = [](const Point&) { return 0.0; };
  F.min_norm = [space, set](const Point& x) {
    return space->dist(x, space->project(set, x)) <= 1e-12 ? 0.0 : detail::kInfinity;
  };
  F.argmin = Region(set);
  return F;
}

/// 1/2 rho^2(., a) + i_C.
inline ConvexFunctional quadratic_plus_indicator_functional(SpaceHandle space, Point a, ConvexSet set) {
  require_member(*space, a, "anchor");
  ConvexFunctional F;
  F.space = space;
  F.eval = [space, a, set](const Point& y) {
    if (space->dist(y, space->project(set, y)) > 1e-9) return detail::kInfinity;
    const double d = space->dist(y, a);
    return 0.5 * d * d;
  };
  if (detail::composite_prox_is_exact(*space, set)) {
    F.prox = [space, a, set](double lambda, const Point& x, const SolverTolerance&) {
      return space->project(set, detail::toward(*space, x, a, lambda));
    };
  }
  F.domain_set = set;
  F.smooth = [space, a](const Point& y) {
    const double d = space->dist(y, a);
    return 0.5 * d * d;
  };
  // Probe once: closed-form |Ax| exists for this space/set combination?
  if (detail::composite_min_norm(*space, a, set, space->project(set, a))) {
    F.min_norm = [space, a, set](const Point& x) { return *detail::composite_min_norm(*space, a, set, x); };
  }
  F.argmin = Region::point(space->project(set, a));
  return F;
}

inline MonotoneField quadratic_field(SpaceHandle space, Point a) {
  return subdifferential_field(quadratic_functional(std::move(space), std::move(a)), "quadratic");
}

inline MonotoneField indicator_field(SpaceHandle space, ConvexSet set) {
  return subdifferential_field(indicator_functional(std::move(space), std::move(set)), "indicator");
}

inline MonotoneField quadratic_plus_indicator_field(SpaceHandle space, Point a, ConvexSet set) {
  return subdifferential_field(quadratic_plus_indicator_functional(std::move(space), std::move(a), std::move(set)),
                               "quadratic_plus_indicator");
}

// Nonexpansive maps. Each carries the closed-form resolvent of its
// complementary field where one exists.

inline NonexpansiveMap identity_map(SpaceHandle space) {
  NonexpansiveMap T;
  T.name = "identity";
  T.space = space;
  T.apply = [](const Point& x) { return x; };
  T.resolvent = [](double, const Point& x, const SolverTolerance&) { return x; };
  T.fixed_set = Region(WholeSpace{});
  return T;
}

inline NonexpansiveMap constant_map(SpaceHandle space, Point c) {
  require_member(*space, c, "constant");
  NonexpansiveMap T;
  T.name = "constant";
  T.space = space;
  T.apply = [c](const Point&) { return c; };
  T.resolvent = [space, c](double lambda, const Point& x, const SolverTolerance&) {
    return detail::toward(*space, x, c, lambda);
  };
  T.fixed_set = Region::point(c);
  return T;
}

/// x -> -x on R^n.
inline NonexpansiveMap reflection_map(SpaceHandle space) {
  const auto* e = space_as<EuclideanSpace>(*space);
  if (!e) raise(Errc::unsupported_space, "reflection is defined on R^n only");
  NonexpansiveMap T;
  T.name = "reflection";
  T.space = space;
  T.apply = [e](const Point& x) {
    std::vector<double> c(x.coords().begin(), x.coords().end());
    for (double& v : c) v = -v;
    return e->make_point(std::move(c));
  };
  T.resolvent = [e](double lambda, const Point& x, const SolverTolerance&) {
    std::vector<double> c(x.coords().begin(), x.coords().end());
    for (double& v : c) v /= 1.0 + 2.0 * lambda;
    return e->make_point(std::move(c));
  };
  T.fixed_set = Region::point(e->make_point(std::vector<double>(e->dim(), 0.0)));
  return T;
}

/// Rotation by theta about the origin of R^2.
inline NonexpansiveMap rotation_map(SpaceHandle space, double theta) {
  const auto* e = space_as<EuclideanSpace>(*space);
  if (!e || e->dim() != 2) raise(Errc::unsupported_space, "rotation is defined on R^2 only");
  const double c = std::cos(theta), s = std::sin(theta);
  NonexpansiveMap T;
  T.name = "rotation";
  T.space = space;
  T.apply = [e, c, s](const Point& x) { return e->make_point({c * x[0] - s * x[1], s * x[0] + c * x[1]}); };
  // Solve ((1 + lambda) I - lambda R) z = x.
  T.resolvent = [e, c, s](double lambda, const Point& x, const SolverTolerance&) {
    const double m00 = 1.0 + lambda - lambda * c, m01 = lambda * s;
    const double det = m00 * m00 + m01 * m01;
    return e->make_point({(m00 * x[0] - m01 * x[1]) / det, (m01 * x[0] + m00 * x[1]) / det});
  };
  if (std::abs(std::remainder(theta, 2.0 * std::acos(-1.0))) == 0.0) {
    T.fixed_set = Region(WholeSpace{});
  } else {
    T.fixed_set = Region::point(e->make_point({0.0, 0.0}));
  }
  return T;
}

/// Metric projection onto C. Points of [x, P_C x] project to P_C x, so the
/// resolvent fixed point sits on that segment.
inline NonexpansiveMap projection_map(SpaceHandle space, ConvexSet set) {
  NonexpansiveMap T;
  T.name = "projection";
  T.space = space;
  T.apply = [space, set](const Point& x) { return space->project(set, x); };
  T.resolvent = [space, set](double lambda, const Point& x, const SolverTolerance&) {
    return detail::toward(*space, x, space->project(set, x), lambda);
  };
  T.fixed_set = Region(set);
  return T;
}

inline MonotoneField complementary_catalog_field(NonexpansiveMap T) { return complementary_field(std::move(T)); }

}  // namespace hadamard
