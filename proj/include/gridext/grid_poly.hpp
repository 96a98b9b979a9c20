#pragma once

#include <limits>
#include <span>
#include <vector>

namespace gridext {

/// The n equispaced points (2k - n - 1)/(n - 1), k = 1..n, on [-1, 1].
struct Grid {
  int n = 0;
  std::vector<double> points;

  double spacing() const { return 2.0 / (n - 1); }

  /// Index k with points[k] <= x < points[k+1]; -1 left of the grid,
  /// n - 1 at or right of the last point.
  int gap_index(double x) const;

  /// Index of a grid point within `tol` of x, or -1.
  int node_near(double x, double tol) const;
};

Grid make_grid(int n);

/// Polynomial on [-1, 1] in the Chebyshev-T basis: sum_j c_j T_j(x).
class ChebPoly {
 public:
  /// Coefficients below this fraction of max|c| do not count toward degree.
  static constexpr double kTruncationTol = 1e-13;

  ChebPoly() = default;
  explicit ChebPoly(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Index of the last coefficient above the truncation tolerance; -1 for
  /// the zero polynomial.
  int degree() const;

  /// Clenshaw evaluation; valid for any real x.
  double operator()(double x) const;

  /// Value and first derivative in one pass.
  void eval_with_derivative(double x, double& value, double& slope) const;

  ChebPoly derivative() const;
  ChebPoly scaled(double factor) const;

  /// Drops coefficients beyond degree().
  ChebPoly truncated() const;

  /// Coefficient of x^degree() in the monomial expansion.
  double leading_coefficient() const;

  /// leading * prod (x - r).
  static ChebPoly from_roots(std::span<const double> roots, double leading = 1.0);

  /// x^d expressed in the Chebyshev basis.
  static ChebPoly monomial(int d);

 private:
  std::vector<double> coeffs_;
};

double eval(const ChebPoly& p, double x);

/// leading * prod (x - roots[i]); suited to n-th root asymptotics since
/// values are only ever formed in the log domain.
struct RootProduct {
  double leading = 1.0;
  std::vector<double> roots;
};

struct LogAbs {
  double log_magnitude = 0.0;  ///< -infinity at a zero
  int sign = 0;
};

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

LogAbs eval_log_abs(const RootProduct& p, double x);
LogAbs eval_log_abs(const ChebPoly& p, double x);

struct ZeroSet {
  std::vector<double> zeros;  ///< strictly increasing
  /// max over zeros of |p(z)| / max(1, sup |p| on [z - h, z + h])
  double residual = 0.0;
};

/// Real roots of p in [lo, hi]: colleague-matrix eigenvalues filtered to the
/// window and Newton-polished.  `local_halfwidth` sets the neighbourhood used
/// to scale residuals (callers working on a grid pass its spacing).
ZeroSet roots_in_window(const ChebPoly& p, double lo, double hi,
                        double local_halfwidth = 1e-2);

/// All eigenvalues of the colleague matrix, split into polished real roots
/// and a count of genuinely complex ones.
struct RootSpectrum {
  std::vector<double> real_roots;
  int complex_count = 0;
};
RootSpectrum root_spectrum(const ChebPoly& p);

struct IntervalNorm {
  double value = 0.0;
  double argmax = 0.0;
};

/// max |p| on [lo, hi] from critical points, cross-checked by dense sampling.
IntervalNorm sup_norm_interval(const ChebPoly& p, double lo, double hi);

struct GridNorm {
  double value = 0.0;
  int argmax_index = 0;  ///< lowest index attaining the max
};

GridNorm grid_norm(const ChebPoly& p, const Grid& g);

}  // namespace gridext
