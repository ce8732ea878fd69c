#pragma once

#include <cmath>
#include <utility>

namespace hk {

// Golden-section search for the minimizer of a unimodal function on [lo, hi].
// Stops when the bracket is narrower than tol or after max_iter shrinks and
// returns the bracket midpoint (error <= tol/2 for a unimodal objective).
template <class F>
double golden_section_min(F&& f, double lo, double hi, double tol = 1e-12,
                          int max_iter = 200) {
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo <= tol) return 0.5 * (lo + hi);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);

  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    if (fc < fd) {
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
  }
  return 0.5 * (lo + hi);
}

}  // namespace hk
