#ifndef LIESIG_ORACLES_HPP
#define LIESIG_ORACLES_HPP

// Reference computations for verification only.  Nothing in the library's
// computational paths calls into this header.

#include <cmath>

namespace liesig::oracle {

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm, double whole, double tol,
                    int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction to absolute tolerance `tol`.
template <typename F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-13, int max_depth = 50) {
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace liesig::oracle

#endif
