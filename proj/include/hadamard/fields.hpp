#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hadamard/model_spaces.hpp"
#include "hadamard/tangent.hpp"

namespace hadamard {

/// Inner-solver controls shared by resolvent oracles.
struct SolverTolerance {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct WholeSpace {};

/// A closed convex subset given as the whole space, a ConvexSet, or a finite
/// list of points (nearest-point semantics; exact only for singletons).
class Region {
 public:
  using Variant = std::variant<WholeSpace, ConvexSet, std::vector<Point>>;

  Region(WholeSpace w = {}) : kind_(w) {}                     // NOLINT(google-explicit-constructor)
  Region(ConvexSet s) : kind_(std::move(s)) {}                // NOLINT(google-explicit-constructor)
  Region(std::vector<Point> pts) : kind_(std::move(pts)) {    // NOLINT(google-explicit-constructor)
    if (std::get<std::vector<Point>>(kind_).empty()) raise(Errc::invalid_spec, "empty point region");
  }
  static Region point(Point p) { return Region(std::vector<Point>{std::move(p)}); }

  const Variant& kind() const noexcept { return kind_; }
  bool is_whole() const noexcept { return std::holds_alternative<WholeSpace>(kind_); }
  const ConvexSet* as_set() const noexcept { return std::get_if<ConvexSet>(&kind_); }

  Point project(const Space& space, const Point& x) const {
    require_member(space, x);
    if (is_whole()) return x;
    if (const auto* s = as_set()) return space.project(*s, x);
    const auto& pts = std::get<std::vector<Point>>(kind_);
    const Point* best = &pts.front();
    double best_d = space.dist(x, *best);
    for (const auto& p : pts) {
      const double d = space.dist(x, p);
      if (d < best_d) {
        best_d = d;
        best = &p;
      }
    }
    return *best;
  }

  double distance_to(const Space& space, const Point& x) const { return space.dist(x, project(space, x)); }

 private:
  Variant kind_;
};

struct GraphSample {
  Point p;
  TangentVec v;
};

using ResolventOracle = std::function<Point(double lambda, const Point& x, const SolverTolerance& tol)>;
using GraphSampler = std::function<GraphSample(std::uint64_t seed)>;
using MinNormOracle = std::function<double(const Point& x)>;

/// A monotone vector field presented through its resolvent, with optional
/// graph sampler, minimal-norm oracle, zero-set and domain witnesses.
/// Surjectivity is assumed: user-supplied oracles are trusted.
struct MonotoneField {
  std::string name;
  SpaceHandle space;
  ResolventOracle resolvent;
  GraphSampler graph_sampler;
  MinNormOracle min_norm;
  std::optional<Region> zero_set;
  std::optional<Region> domain;  // closure of dom A
};

/// Proper convex lower semicontinuous F : X -> (-inf, +inf].
struct ConvexFunctional {
  SpaceHandle space;
  std::function<double(const Point&)> eval;
  ResolventOracle prox;                 // closed form, if known
  std::optional<ConvexSet> domain_set;  // closure of dom F, if restricted
  // Finite convex function agreeing with F on domain_set (F = smooth + i_C);
  // lets the generic solver difference across the boundary of C.
  std::function<double(const Point&)> smooth;
  MinNormOracle min_norm;               // |dF(x)|, if known
  std::optional<Region> argmin;
};

/// A nonexpansive self-map with optional closed-form resolvent of A_T.
struct NonexpansiveMap {
  std::string name;
  SpaceHandle space;
  std::function<Point(const Point&)> apply;
  ResolventOracle resolvent;
  std::optional<Region> fixed_set;
};

namespace detail {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double log_uniform_lambda(Rng& rng) { return std::pow(10.0, rng.uniform(-2.0, 1.0)); }

/// A point y with gamma_{p,y} = -gamma_{p,x}: a short backward extension of
/// the geodesic from x through p (shortened to fit the room on trees).
inline Point negative_witness(const Space& space, const Point& p, const Point& x) {
  const double d = space.dist(p, x);
  const double room = space.extension_room(p, x);
  if (!(room > 0.0)) raise(Errc::no_extension, "no negative geodesic at " + space.format(p));
  const double s = -std::min(1.0, 0.5 * room / d);
  return extend_geodesic(space, p, x, s);
}

}  // namespace detail

/// The vector t * (-gamma_{p,x}) in T_pH.
inline TangentVec negative_direction(const SpaceHandle& space, const Point& p, const Point& x, double t) {
  if (t == 0.0 || space->dist(p, x) == 0.0) return TangentVec::zero_at(space, p);
  return TangentVec::make(space, p, t, detail::negative_witness(*space, p, x));
}

/// A_T p = rho(p, Tp) (-gamma_{p,Tp}); no nonexpansiveness check.
inline TangentVec complementary_vector(const SpaceHandle& space, const std::function<Point(const Point&)>& T,
                                       const Point& p) {
  const Point tp = T(p);
  return negative_direction(space, p, tp, space->dist(p, tp));
}

/// Below this separation gamma_{p,q} is rounding noise and p, q count as equal.
inline constexpr double kCoincidentPoints = 1e-12;

/// g_p(u, gamma_{p,q}) + g_q(v, gamma_{q,p}); nonpositive for monotone fields.
inline double monotonicity_residual(const GraphSample& a, const GraphSample& b) {
  const SpaceHandle& space = a.v.space();
  if (!(a.v.base() == a.p) || !(b.v.base() == b.p)) {
    raise(Errc::base_mismatch, "graph vector is not based at its point");
  }
  require_member(*space, b.p);
  if (space->dist(a.p, b.p) <= kCoincidentPoints) return 0.0;
  const TangentVec pq = TangentVec::direction(space, a.p, b.p);
  const TangentVec qp = TangentVec::direction(space, b.p, a.p);
  return tangent_inner(a.v, pq) + tangent_inner(b.v, qp);
}

inline double monotonicity_residual(const MonotoneField& field, const GraphSample& a, const GraphSample& b) {
  if (a.v.space()->id() != field.space->id()) raise(Errc::space_mismatch, "graph pair from another space");
  return monotonicity_residual(a, b);
}

/// Resolvent-derived subgradient: for pbar = J_lambda x, the vector
/// lambda^{-1} rho(pbar, x) gamma_{pbar, x} lies in A pbar.
inline GraphSample resolvent_graph_point(const SpaceHandle& space, const ResolventOracle& resolvent, double lambda,
                                         const Point& x) {
  Point pbar = resolvent(lambda, x, SolverTolerance{});
  const double d = space->dist(pbar, x);
  TangentVec v = d == 0.0 ? TangentVec::zero_at(space, pbar) : TangentVec::make(space, pbar, d / lambda, x);
  return {std::move(pbar), std::move(v)};
}

inline Point generic_prox(const ConvexFunctional& F, double lambda, const Point& x, const SolverTolerance& tol);

/// The subdifferential of F as a monotone field; J_lambda = prox_lambda F.
/// The graph sampler only reaches subgradients of resolvent form.
inline MonotoneField subdifferential_field(ConvexFunctional F, std::string name = "subdifferential") {
  MonotoneField field;
  field.name = std::move(name);
  field.space = F.space;
  if (F.prox) {
    field.resolvent = F.prox;
  } else {
    field.resolvent = [F](double lambda, const Point& x, const SolverTolerance& tol) {
      return generic_prox(F, lambda, x, tol);
    };
  }
  field.graph_sampler = [space = F.space, resolvent = field.resolvent](std::uint64_t seed) {
    Rng rng(seed);
    const Point x = space->sample(rng);
    return resolvent_graph_point(space, resolvent, detail::log_uniform_lambda(rng), x);
  };
  field.min_norm = F.min_norm;
  field.zero_set = F.argmin;
  if (F.domain_set) field.domain = Region(*F.domain_set);
  return field;
}

/// Banach iteration for the resolvent of A_T: z <- gamma_{x, Tz}(lambda/(1+lambda)),
/// a lambda/(1+lambda)-contraction.
inline Point complementary_resolvent_iterate(const Space& space, const std::function<Point(const Point&)>& T,
                                             double lambda, const Point& x, const SolverTolerance& tol) {
  const double s = lambda / (1.0 + lambda);
  Point z = x;
  const double step_tol = std::min(tol.tol, 1e-12);
  for (std::size_t it = 0; it < tol.max_iter; ++it) {
    Point next = geodesic_point(space, x, T(z), s);
    const double step = space.dist(next, z);
    z = std::move(next);
    if (step < step_tol) return z;
  }
  raise(Errc::prox_diverged, "complementary resolvent iteration did not settle");
}

/// Sampled check rho(Tx, Ty) <= rho(x, y) + 1e-9.
inline void check_nonexpansive(const NonexpansiveMap& T, std::size_t samples = 200, std::uint64_t seed = 7) {
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = T.space->sample(rng), y = T.space->sample(rng);
    const double lhs = T.space->dist(T.apply(x), T.apply(y));
    const double rhs = T.space->dist(x, y);
    if (lhs > rhs + 1e-9) {
      raise(Errc::not_nonexpansive, "map '" + T.name + "' expands the pair " + T.space->format(x) + ", " +
                                        T.space->format(y));
    }
  }
}

/// A_T x = rho(x, Tx)(-gamma_{x,Tx}) for a nonexpansive T; zeros are Fix(T).
inline MonotoneField complementary_field(NonexpansiveMap T, std::size_t check_samples = 200) {
  check_nonexpansive(T, check_samples);
  MonotoneField field;
  field.name = "complementary(" + T.name + ")";
  field.space = T.space;
  if (T.resolvent) {
    field.resolvent = T.resolvent;
  } else {
    field.resolvent = [space = T.space, apply = T.apply](double lambda, const Point& x, const SolverTolerance& tol) {
      return complementary_resolvent_iterate(*space, apply, lambda, x, tol);
    };
  }
  field.graph_sampler = [space = T.space, apply = T.apply](std::uint64_t seed) {
    Rng rng(seed);
    Point p = space->sample(rng);
    TangentVec v = complementary_vector(space, apply, p);
    return GraphSample{std::move(p), std::move(v)};
  };
  field.min_norm = [space = T.space, apply = T.apply](const Point& x) { return space->dist(x, apply(x)); };
  field.zero_set = T.fixed_set;
  field.domain = Region(WholeSpace{});
  return field;
}

/// |Ax|: closed form when available, otherwise lambda^{-1} rho(x, J_lambda x)
/// at lambda = 1e-6 (a lower bound), reported as +inf above 1e12.
inline double field_min_norm(const MonotoneField& field, const Point& x) {
  if (field.min_norm) return field.min_norm(x);
  constexpr double lambda = 1e-6;
  const double est = field.space->dist(x, field.resolvent(lambda, x, SolverTolerance{})) / lambda;
  return est > 1e12 ? detail::kInfinity : est;
}

}  // namespace hadamard

#include "hadamard/prox_solver.hpp"
