#pragma once

// Oracles shared by the unit tests.  Each one is written from first
// principles and uses none of the library's solvers.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline std::vector<double> grid(int n) {
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) xs[k] = (2.0 * (k + 1) - n - 1) / (n - 1);
  return xs;
}

/// Value at x of the interpolant of the data ys on the nodes xs, in Lagrange form.
inline double lagrange(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double l = 1.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j != k) l *= (x - xs[j]) / (xs[k] - xs[j]);
    }
    s += ys[k] * l;
  }
  return s;
}

/// max over all 2^n sign patterns of the interpolant at x.
inline double sign_pattern_max(const std::vector<double>& xs, double x) {
  const int n = static_cast<int>(xs.size());
  double best = -1.0;
  std::vector<double> ys(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int k = 0; k < n; ++k) ys[k] = (mask >> k) & 1u ? 1.0 : -1.0;
    best = std::max(best, lagrange(xs, ys, x));
  }
  return best;
}

/// Monomial-basis Horner evaluation, coefficients from constant upward.
inline double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

/// prod (x - r_i).
inline double root_product(const std::vector<double>& roots, double x) {
  double v = 1.0;
  for (double r : roots) v *= x - r;
  return v;
}

/// Maximum of |f| on [a, b]: dense samples, then a ternary search around the best one.
template <class F>
double dense_sup(F&& f, double a, double b, int samples = 20000) {
  double best = 0.0, arg = a;
  for (int i = 0; i <= samples; ++i) {
    const double x = a + (b - a) * i / samples;
    const double v = std::abs(f(x));
    if (v > best) {
      best = v;
      arg = x;
    }
  }
  double lo = std::max(a, arg - (b - a) / samples), hi = std::min(b, arg + (b - a) / samples);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (std::abs(f(m1)) < std::abs(f(m2))) lo = m1;
    else hi = m2;
  }
  return std::max(best, std::abs(f(0.5 * (lo + hi))));
}

}  // namespace oracle
