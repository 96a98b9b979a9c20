#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridext/equilibrium.hpp"
#include "gridext/ratio_extremal.hpp"

namespace gridext {

/// Named tolerances and search settings for the experiment harness.  The
/// defaults are the calibrated values; config/harness.json carries the same
/// numbers and is what the CLI and the acceptance suite read.
struct HarnessConfig {
  double ratio_extrapolation_rel_tol = 0.05;
  double monic_extrapolation_rel_tol = 0.07;
  double saturated_mass_tol = 0.02;
  double ordering_slack = 1e-12;
  double j_margin = 1e-4;
  double support_threshold = 1e-9;
  int scan_points = 8;
  double refine_width = 1e-10;
  int refine_gaps = 4;
  int workers = 1;

  RatioOptions ratio_options() const;
};

/// P_n* of degree d on the n-grid, summarized in the log domain.
struct MonicRoute {
  int n = 0;
  int d = 0;
  double grid_norm = 0.0;      ///< min over monic P of max_k |P(xi_k)|
  double log_grid_norm = 0.0;
  double log_sup = 0.0;        ///< log max_{[-1,1]} |P|
  double argmax = 0.0;
  double value = 0.0;          ///< (log_sup - log_grid_norm) / n
  std::vector<double> zeros;   ///< all d zeros, sorted
  int max_zeros_per_gap = 0;
  bool zeros_inside = false;   ///< every zero in (-1, 1)
  double certificate_gap = 0.0;
};

/// Solves the monic problem and extracts all zeros from the orthonormal
/// expansion; fails with NumericFailure unless exactly d real zeros appear.
MonicRoute monic_route(int n, int d);

/// log max_{x in [lo, hi]} prod |x - z_i| for a sorted list of real zeros,
/// using the critical point between each consecutive pair; returns
/// (value, argmax).
std::pair<double, double> log_sup_monic(const std::vector<double>& zeros, double lo = -1.0, double hi = 1.0);

/// Kolmogorov distance between a zero-counting step function and cdf(mu_alpha).
double ks_distance(const StepCdf& empirical, const AlphaMeasure& mu);

/// Fraction of zeros (weight 1/n each) lying in [lo, hi].
double empirical_mass(const StepCdf& empirical, double lo, double hi);

enum class ZeroSource { Ratio, Monic };

double zero_distribution_distance(int n, double alpha, ZeroSource source, const RatioOptions& options = {});

struct LinearFit {
  double a = 0.0;  ///< intercept: the extrapolated limit
  double b = 0.0;  ///< coefficient of 1/n
  double residual = 0.0;  ///< root-mean-square residual of the fit
  int points = 0;
};

/// Least-squares fit y = a + b / n over the largest three n (fewer points
/// when fewer are given; one point gives a = y).
LinearFit fit_inverse_n(const std::vector<int>& ns, const std::vector<double>& ys);

struct SweepRow {
  int n = 0;
  int d = 0;
  std::optional<double> ratio;
  std::optional<double> log_ratio_over_n;
  std::optional<double> monic_route_value;
  std::optional<double> ks_distance;  ///< monic zeros when available, otherwise ratio zeros
  bool structure_ok = true;
};

struct SweepReport {
  double alpha = 0.0;
  std::string route;  ///< "ratio", "monic" or "both"
  std::vector<SweepRow> rows;  ///< sorted by n
  double target = 0.0;
  std::optional<LinearFit> ratio_fit;
  std::optional<LinearFit> monic_fit;
  std::optional<double> extrapolated;  ///< ratio route
  std::optional<double> rel_error;
  std::optional<double> monic_extrapolated;
  std::optional<double> monic_rel_error;
};

SweepReport sweep_ratio(double alpha, std::vector<int> n_list, const RatioOptions& options = {});
SweepReport sweep_monic(double alpha, std::vector<int> n_list, int workers = 1);
SweepReport sweep_both(double alpha, std::vector<int> n_list, const RatioOptions& options = {});

struct CRRow {
  int n = 0;
  int d = 0;
  double ratio = 1.0;
  double exponent_estimate = 0.0;  ///< n log(ratio) / d^2
};

struct CRReport {
  double c = 0.0;
  std::vector<CRRow> rows;
  double band_min = 0.0;
  double band_max = 0.0;
};

/// Degree d = round(c sqrt(n)) for each n.
CRReport cr_regime(double c, std::vector<int> n_list, const RatioOptions& options = {});

}  // namespace gridext
