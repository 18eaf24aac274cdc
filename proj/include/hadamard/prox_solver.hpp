#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hadamard/fields.hpp"
#include "hadamard/minimize1d.hpp"

namespace hadamard {

namespace detail {

inline double moreau_objective(const ConvexFunctional& F, double lambda, const Point& x, const Point& y) {
  const double fy = F.smooth ? F.smooth(y) : F.eval(y);
  if (!std::isfinite(fy)) return std::numeric_limits<double>::infinity();
  const double d = F.space->dist(y, x);
  return fy + d * d / (2.0 * lambda);
}

/// Edge-wise search: the restriction of a geodesically convex objective to an
/// edge is unimodal; the global minimizer is the best edge minimizer.
inline Point tree_prox(const TreeSpace& tree, const ConvexFunctional& F, double lambda, const Point& x) {
  Point best = x;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < tree.edge_count(); ++e) {
    double lo = 0.0, hi = tree.edge(e).length;
    if (F.domain_set) {
      auto iv = tree.edge_interval(*F.domain_set, e);
      if (!iv) continue;
      std::tie(lo, hi) = *iv;
    }
    auto phi = [&](double o) { return moreau_objective(F, lambda, x, tree.at(e, std::clamp(o, lo, hi))); };
    auto [t, val] = minimize_unimodal(phi, lo, hi);
    if (val < best_val) {
      best_val = val;
      best = tree.at(e, std::clamp(t, lo, hi));
    }
  }
  if (!std::isfinite(best_val)) raise(Errc::prox_diverged, "objective is infinite on every edge");
  return best;
}

/// Projected geodesic gradient descent in the exponential chart, with a
/// central-difference gradient. Armijo backtracking drives the descent until
/// function values stop resolving progress (positions good to ~sqrt(eps));
/// a fixed-step phase at the last accepted step then refines on
/// gradient information alone until the step falls below tolerance.
inline Point chart_prox(const Space& space, const ManifoldChart& chart, const ConvexFunctional& F, double lambda,
                        const Point& x, const SolverTolerance& tol) {
  constexpr double h = 1e-6;
  const double step_tol = std::max(tol.tol, 1e-14);
  auto restrict = [&](const Point& p) { return F.domain_set ? space.project(*F.domain_set, p) : p; };
  auto phi = [&](const Point& y) { return moreau_objective(F, lambda, x, y); };
  Point y = restrict(x);
  double fy = phi(y);
  if (!std::isfinite(fy)) raise(Errc::prox_diverged, "objective infinite at the starting point");
  const std::size_t n = chart.tangent_dim();
  std::vector<double> g(n), v(n);
  double alpha = lambda / (1.0 + lambda);
  double accepted_alpha = alpha;
  bool refining = false;
  double best_moved = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (std::size_t it = 0; it < tol.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(v.begin(), v.end(), 0.0);
      v[i] = h;
      const double fp = phi(chart.exp(y, v));
      v[i] = -h;
      const double fm = phi(chart.exp(y, v));
      g[i] = (fp - fm) / (2.0 * h);
    }
    double gn = 0.0;
    for (double c : g) gn += c * c;
    gn = std::sqrt(gn);
    // Trial steps stay within a trust radius: far-out hyperboloid points lose
    // digits that a projection back onto C cannot recover.
    const double max_step = 1.0 + 2.0 * space.dist(x, y);
    auto trial = [&](double a) {
      const double scale = gn * a > max_step ? max_step / gn : a;
      for (std::size_t i = 0; i < n; ++i) v[i] = -scale * g[i];
      return std::pair{restrict(chart.exp(y, v)), scale};
    };
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(fy) + 1.0);

    if (refining) {
      auto [next, scale] = trial(alpha);
      const double fn = phi(next);
      if (fn > fy + noise) return y;
      const double moved = space.dist(next, y);
      y = std::move(next);
      fy = std::min(fy, fn);
      if (moved < step_tol) return y;
      // At the gradient noise floor the steps stop shrinking; that is as
      // close as finite differences can resolve.
      if (moved < 0.5 * best_moved) {
        best_moved = moved;
        stalled = 0;
      } else if (++stalled >= 4) {
        return y;
      }
      continue;
    }

    bool accepted = false;
    Point next;
    double fn = 0.0, moved = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      auto [cand, scale] = trial(alpha);
      fn = phi(cand);
      moved = space.dist(cand, y);
      // c = 1/2 keeps accepted steps at alpha L <= 1, free of oscillation.
      if (fn <= fy - 0.5 * moved * moved / scale) {
        next = std::move(cand);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || fy - fn <= noise) {
      // Failed backtracking only means values no longer resolve descent; the
      // fixed-step phase decides convergence.
      if (accepted) y = std::move(next);
      refining = true;
      alpha = accepted_alpha;
      continue;
    }
    y = std::move(next);
    fy = fn;
    if (moved < step_tol) return y;
    accepted_alpha = alpha;
    alpha = std::min(2.0 * alpha, lambda);
  }
  raise(Errc::prox_diverged, "gradient descent did not reach tolerance");
}

}  // namespace detail

/// prox_lambda F(x) = argmin_y F(y) + rho^2(y, x) / (2 lambda) without a closed form.
inline Point generic_prox(const ConvexFunctional& F, double lambda, const Point& x, const SolverTolerance& tol) {
  if (!(lambda > 0.0)) raise(Errc::domain_error, "prox parameter must be positive");
  const Space& space = *F.space;
  require_member(space, x);
  if (const auto* tree = space_as<TreeSpace>(space)) return detail::tree_prox(*tree, F, lambda, x);
  if (const auto* chart = space.chart()) return detail::chart_prox(space, *chart, F, lambda, x, tol);
  raise(Errc::unsupported_space, "no generic prox solver for " + space.describe());
}

}  // namespace hadamard
