#pragma once

#include <cmath>
#include <utility>

namespace gridext::detail {

/// Golden-section search for a maximum of f on [a, b].  Returns (x, f(x)) of
/// the best point seen; the bracket is shrunk until its width is <= tol.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol,
                                     int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace gridext::detail
