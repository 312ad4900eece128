#pragma once

#include <cmath>
#include <limits>

#include "rnds/errors.hpp"

namespace rnds::detail {

/// Bisection on a bracket with a sign change. Runs until the bracket stops
/// shrinking in floating point, so the result is the best representable root.
template <class F>
double bisect(F&& fn, double lo, double hi) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericalError("bisect: bracket does not straddle a sign change");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Newton polish that only accepts steps reducing |fn|.
template <class F, class DF>
double newton_polish(F&& fn, DF&& dfn, double x, int max_steps = 8) {
  double fx = fn(x);
  for (int i = 0; i < max_steps && fx != 0.0; ++i) {
    const double d = dfn(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = x - fx / d;
    const double fnext = fn(next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

inline double sqr(double x) noexcept { return x * x; }

}  // namespace rnds::detail
