#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace hadamard::detail {

/// Minimizer of a unimodal f on [lo, hi]: golden-section bracketing, then
/// parabolic refinement with widely spaced nodes (golden section alone stalls
/// near sqrt(eps) relative accuracy at a flat minimum). Returns (t, f(t)).
template <class F>
std::pair<double, double> minimize_unimodal(F&& f, double lo, double hi, double bracket = 1e-4) {
  if (hi <= lo) return {lo, f(lo)};
  const double width = hi - lo;
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > bracket * width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double t = fc <= fd ? c : d;
  double ft = std::min(fc, fd);
  double h = 0.5 * (b - a);
  for (int it = 0; it < 12 && h > 1e-15 * std::max(1.0, width); ++it) {
    const double l = std::max(lo, t - h), r = std::min(hi, t + h);
    const double m = 0.5 * (l + r);
    const double fl = f(l), fm = f(m), fr = f(r);
    const double denom = fl - 2.0 * fm + fr;
    double next = m;
    if (denom > 0.0) next = std::clamp(m + 0.25 * (r - l) * (fl - fr) / denom, lo, hi);
    const double fn = f(next);
    double best_t = next, best_f = fn;
    for (auto [tt, ff] : {std::pair{l, fl}, std::pair{m, fm}, std::pair{r, fr}}) {
      if (ff < best_f) {
        best_t = tt;
        best_f = ff;
      }
    }
    if (best_f <= ft) {
      t = best_t;
      ft = best_f;
    }
    h *= 0.25;
  }
  for (double end : {lo, hi}) {
    const double fe = f(end);
    if (fe < ft) {
      t = end;
      ft = fe;
    }
  }
  return {t, ft};
}

}  // namespace hadamard::detail
