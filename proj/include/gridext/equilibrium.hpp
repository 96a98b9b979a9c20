#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gridext {

// ---------------------------------------------------------------------------
// The constant C(alpha)
// ---------------------------------------------------------------------------

/// ((1+a) log(1+a) + (1-a) log(1-a)) / 2 for a in [0, 1).
double C_closed(double alpha);

/// Partial sum  sum_{k=1..terms} a^{2k} / (2k (2k-1)).
double C_taylor(double alpha, int terms);

/// int_r^1 [ log(a + sqrt(x^2 - r^2)) - log(1 - x^2) / 2 ] dx, r = sqrt(1 - a^2),
/// by tanh-sinh quadrature after substituting x = 1 - t^2.
double C_integral(double alpha);

/// The integrand of C_integral at x in [r, 1).
double C_integrand(double alpha, double x);

/// dC/da = (log(1+a) - log(1-a)) / 2.
double dC_dalpha(double alpha);

// ---------------------------------------------------------------------------
// Measures with piecewise densities on [-1, 1]
// ---------------------------------------------------------------------------

enum class DensityKind {
  Uniform,  ///< constant `value`
  MuAlpha,  ///< (1/pi) arctan(alpha / sqrt(r^2 - x^2)), the unsaturated branch
  Table,    ///< linear interpolation of (xs, ys)
  Custom,   ///< arbitrary callable; potentials fall back to quadrature
};

struct DensityPiece {
  double a = -1.0;
  double b = 1.0;
  DensityKind kind = DensityKind::Uniform;
  double value = 0.0;
  double alpha = 0.0;
  std::vector<double> xs, ys;
  std::function<double(double)> fn;

  double operator()(double x) const;

  static DensityPiece uniform(double a, double b, double value);
  static DensityPiece mu_alpha_branch(double alpha);
  static DensityPiece table(std::vector<double> xs, std::vector<double> ys);
  static DensityPiece custom(double a, double b, std::function<double(double)> fn);
};

/// Absolutely continuous measure with density given piece by piece.  Pieces
/// must have disjoint interiors inside [-1, 1]; they are kept sorted.
class PiecewiseMeasure {
 public:
  PiecewiseMeasure() = default;
  explicit PiecewiseMeasure(std::vector<DensityPiece> pieces, std::string kind = "custom");

  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  const std::string& kind() const { return kind_; }
  double total_mass() const { return mass_; }

  /// Density at x (zero off the pieces).  At a shared breakpoint the left
  /// piece wins.
  double density(double x) const;

  /// Sorted breakpoints of all pieces.
  std::vector<double> breakpoints() const;

 private:
  std::vector<DensityPiece> pieces_;
  std::string kind_ = "custom";
  double mass_ = 0.0;
};

/// Half of Lebesgue measure on [-1, 1].
PiecewiseMeasure sigma();
/// Constant density `value` on [a, b].
PiecewiseMeasure uniform_measure(double a, double b, double value);
/// alpha * sigma: density alpha/2 on [-1, 1].
PiecewiseMeasure scaled_sigma(double alpha);
/// sigma restricted to [-t, t] (mass t).
PiecewiseMeasure truncated_sigma(double t);
/// lambda * m1 + (1 - lambda) * m2 on the merged breakpoints.
PiecewiseMeasure mixture(const PiecewiseMeasure& m1, const PiecewiseMeasure& m2, double lambda);
/// m plus the odd bump eps * x (c^2 - x^2) on [-c, c]; total mass unchanged.
PiecewiseMeasure odd_perturbation(const PiecewiseMeasure& m, double eps, double c);

struct AlphaMeasure {
  double alpha = 0.0;
  double r = 1.0;  ///< sqrt(1 - alpha^2)
  PiecewiseMeasure measure;

  /// Density written with arctan (the form stored in `measure`).
  double density_arctan(double x) const;
  /// Density written as 1/2 - (1/pi) arccos(alpha / sqrt(1 - x^2)).
  double density_arccos(double x) const;
  bool saturated(double x) const { return x <= -r || x >= r; }
};

/// The constrained equilibrium measure of mass alpha under sigma.  Checks
/// its mass (to 1e-10) and density bounds on construction.
AlphaMeasure mu_alpha(double alpha);

/// Checks 0 <= density <= 1/2 + 1e-12 on a sample and returns the largest
/// violation (0 when the measure is admissible).
double density_bound_violation(const PiecewiseMeasure& m, int samples_per_piece = 401);

/// int_{-1}^x dmu.
double cdf(const PiecewiseMeasure& m, double x);

/// U^mu(x) = int log(1 / |x - y|) dmu(y).
double potential(const PiecewiseMeasure& m, double x);

/// Logarithmic energy  int int log(1 / |x - y|) dmu dmu = int U^mu dmu.
double energy(const PiecewiseMeasure& m);

/// dU^{mu_alpha}/dx = log(1 - x^2) / 2 - log(alpha + sqrt(x^2 - r^2)) for r < x < 1.
double potential_derivative_closed(double alpha, double x);

/// I_alpha(x) = log(1 + x) - log(alpha + sqrt(x^2 - r^2)) for x > r.
double I_alpha_closed(double alpha, double x);
/// (1/pi) int_{-r}^r arccos(alpha / sqrt(1 - y^2)) / (x - y) dy by quadrature.
double I_alpha_quadrature(double alpha, double x);

struct EquilibriumData {
  double alpha = 0.0;
  double r = 0.0;
  double ell_alpha = 0.0;  ///< U^{mu_alpha}(0)
  double potential_on_support_spread = 0.0;  ///< max - min over samples of [-r, r]
  double potential_at_r = 0.0;
  double potential_at_1 = 0.0;
  double C_check = 0.0;  ///< potential_at_r - potential_at_1
  double max_over_interval = 0.0;  ///< sampled max of U on [-1, 1]
  bool saturated_min_at_endpoints = false;
};

EquilibriumData equilibrium_data(double alpha, int support_samples = 50, int interval_samples = 200);

/// Closed intervals making up supp(sigma - mu): closure of the set where the
/// density is below 1/2 - threshold.
std::vector<std::pair<double, double>> unsaturated_support(const PiecewiseMeasure& m,
                                                           double threshold = 1e-9);

/// J(mu) = min over supp(sigma - mu) of U^mu  -  min over [-1, 1] of U^mu.
double J_functional(const PiecewiseMeasure& m);

/// The bundled non-optimal members of M_{alpha,sigma} used in the
/// extremality checks, with short names.
std::vector<std::pair<std::string, PiecewiseMeasure>> j_test_family(double alpha);

}  // namespace gridext
