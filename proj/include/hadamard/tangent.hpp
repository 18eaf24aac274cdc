#pragma once

#include <cmath>
#include <utility>

#include "hadamard/geometry.hpp"

namespace hadamard {

/// Element t*gamma of the tangent cone T_pH. The direction gamma is carried by
/// a witness point: gamma is the direction of the geodesic from base toward
/// witness. The zero flag is the indicator of the equivalence class 0_p.
class TangentVec {
 public:
  static TangentVec make(SpaceHandle space, Point base, double scale, Point witness) {
    if (!(scale >= 0.0)) raise(Errc::domain_error, "tangent scale must be nonnegative");
    require_member(*space, base, "tangent base");
    require_member(*space, witness, "tangent witness");
    const bool zero = scale == 0.0 || space->dist(base, witness) == 0.0;
    return TangentVec(std::move(space), std::move(base), scale, std::move(witness), zero);
  }

  static TangentVec zero_at(SpaceHandle space, Point base) {
    Point witness = base;
    return TangentVec(std::move(space), std::move(base), 0.0, std::move(witness), true);
  }

  /// The unit direction gamma_{p,q} (0_p when q = p).
  static TangentVec direction(SpaceHandle space, const Point& p, const Point& q) {
    return make(std::move(space), p, 1.0, q);
  }

  const SpaceHandle& space() const noexcept { return space_; }
  const Point& base() const noexcept { return base_; }
  double scale() const noexcept { return scale_; }
  const Point& witness() const noexcept { return witness_; }
  bool is_zero() const noexcept { return zero_; }

  /// ||t gamma||_p = t * zeta(gamma).
  double norm() const noexcept { return zero_ ? 0.0 : scale_; }

  TangentVec scaled(double factor) const {
    if (!(factor >= 0.0)) raise(Errc::domain_error, "cone scaling must be nonnegative");
    return TangentVec(space_, base_, scale_ * factor, witness_, zero_ || factor == 0.0);
  }

 private:
  TangentVec(SpaceHandle space, Point base, double scale, Point witness, bool zero)
      : space_(std::move(space)), base_(std::move(base)), scale_(scale), witness_(std::move(witness)),
        zero_(zero) {}

  SpaceHandle space_;
  Point base_;
  double scale_ = 0.0;
  Point witness_;
  bool zero_ = true;
};

namespace detail {

inline void require_common_base(const TangentVec& u, const TangentVec& v) {
  if (u.space()->id() != v.space()->id() || !(u.base() == v.base())) {
    raise(Errc::base_mismatch, "tangent vectors live in different tangent spaces");
  }
}

/// cos of the angle between two nonzero tangent vectors at a common base.
inline double direction_cosine(const TangentVec& u, const TangentVec& v) {
  const double a = alexandrov_angle(*u.space(), u.base(), u.witness(), v.witness()).radians;
  return std::cos(a);
}

}  // namespace detail

/// d_p(u, v) = sqrt(t1^2 z1 + t2^2 z2 - 2 t1 t2 z1 z2 cos angle).
inline double tangent_distance(const TangentVec& u, const TangentVec& v) {
  detail::require_common_base(u, v);
  const double a = u.norm(), b = v.norm();
  if (u.is_zero() || v.is_zero()) return a + b;
  const double cosine = detail::direction_cosine(u, v);
  return std::sqrt(std::max(0.0, a * a + b * b - 2.0 * a * b * cosine));
}

/// g_p(u, v) = (||u||^2 + ||v||^2 - d_p^2(u, v)) / 2, computed in its reduced
/// form t1 t2 z1 z2 cos angle.
inline double tangent_inner(const TangentVec& u, const TangentVec& v) {
  detail::require_common_base(u, v);
  if (u.is_zero() || v.is_zero()) return 0.0;
  return u.norm() * v.norm() * detail::direction_cosine(u, v);
}

/// Equality in T_pH: same base, same norm, and zero angle between directions.
inline bool equivalent(const TangentVec& u, const TangentVec& v, double tol = 1e-12) {
  detail::require_common_base(u, v);
  if (std::abs(u.norm() - v.norm()) > tol) return false;
  if (u.is_zero() || v.is_zero()) return u.norm() <= tol && v.norm() <= tol;
  return tangent_distance(u, v) <= tol;
}

}  // namespace hadamard
