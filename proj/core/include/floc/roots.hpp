#pragma once

#include <cmath>
#include <sstream>

#include "floc/error.hpp"

namespace floc {

/// Bisection on [lo, hi] where f changes sign. Iterates until |f(mid)| <= ftol
/// or the interval cannot shrink further in double precision.
template <class F>
double bisect(F&& f, double lo, double hi, double ftol = 0.0) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "bisection bracket lost: f(" << lo << ")=" << flo << ", f(" << hi << ")=" << fhi;
    throw NumericalError(os.str());
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0 || std::abs(fm) <= ftol) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return std::abs(flo) <= std::abs(f(hi)) ? lo : hi;
}

}  // namespace floc
