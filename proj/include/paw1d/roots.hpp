#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace paw1d::roots {

struct Bracket {
  double lo;
  double hi;
};

// Uniform scan of f on [lo, hi] with the given step; returns every
// subinterval on which f changes sign (an exact zero at a grid point is
// reported as a bracket ending at that point).
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, double step) {
  std::vector<Bracket> out;
  const long count = static_cast<long>(std::ceil((hi - lo) / step));
  double x0 = lo;
  double f0 = f(x0);
  for (long i = 1; i <= count; ++i) {
    const double x1 = (i == count) ? hi : lo + i * step;
    const double f1 = f(x1);
    if (f1 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
      if (f0 != 0.0) out.push_back({x0, x1});
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

// Brent's method on a sign-changing bracket. Iterates until the bracket is
// as small as the floating point spacing allows (or `xtol`, if larger).
template <class F>
double brent(F&& f, double lo, double hi, double xtol = 0.0, int max_iter = 200) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo, b = hi, c = hi;
  double fa = f(a), fb = f(b), fc = fb;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

}  // namespace paw1d::roots
