#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gridext/grid_poly.hpp"
#include "gridext/minmax.hpp"

namespace gridext {

/// floor(alpha * n), guarded against products like 0.7 * 70 landing just
/// below an integer.
int degree_budget(int n, double alpha);

/// Shared, lazily built basis table for (n, d).  Thread safe.
std::shared_ptr<const BasisTable> cached_table(const Grid& g, int d);

/// phi_d(x*) = max { p(x*) : |p| <= 1 on the grid, deg p <= d }.
double phi(const Grid& g, int d, double x_star);

struct RatioOptions {
  int scan_points = 8;        ///< Chebyshev-spaced samples per grid gap
  double refine_width = 1e-10;  ///< golden-section stops below this bracket
  int refine_gaps = 4;        ///< how many leading gaps get refined
  int workers = 1;
};

struct ExtremalSolution {
  int n = 0;
  double alpha = 0.0;
  int degree_budget = 0;
  /// Grid norm 1.  Chebyshev coefficients are of size ~ratio, so grid values
  /// recomputed from them carry an error of about ratio * 2^-52.
  ChebPoly poly;
  double x_star = 0.0;
  double ratio = 1.0;  ///< phi at x_star: sup norm on [-1, 1] over grid norm
  double log_ratio_over_n = 0.0;
  ZeroSet zeros;  ///< real zeros in [-10, 10]
  std::optional<double> outside_zero;
  double phi_at_x_star = 1.0;  ///< LP optimum at x_star
  double certificate_gap = 0.0;
  int lp_solves = 0;
  /// The same polynomial in the grid-orthonormal basis of `table`; zeros and
  /// structure are computed from this form when present.
  std::vector<double> ortho_coeffs;
  std::shared_ptr<const BasisTable> table;
};

/// Maximizes phi_d over [-1, 1] for d = degree_budget(n, alpha).
ExtremalSolution solve_ratio_extremal(int n, double alpha, const RatioOptions& options = {});

/// Same search with the degree given directly; alpha is recorded as d / n.
ExtremalSolution solve_ratio_extremal_degree(int n, int d, const RatioOptions& options = {});

struct StructureReport {
  bool all_real_simple = false;
  int count_in_open_interval = 0;
  bool separation_ok = false;
  int max_zeros_per_gap = 0;
  std::vector<int> gap_counts;  ///< zeros in each open gap (xi_k, xi_{k+1})
  std::vector<double> outside_zeros;  ///< real zeros in [-10, 10] off [-1, 1]
  int complex_zeros = 0;
  int degree_deficit = 0;  ///< budget minus actual degree
  double min_derivative_ratio = 0.0;  ///< min |p'(z)| / local scale
};

StructureReport analyze_structure(const ExtremalSolution& sol);

/// Right-continuous step function with jumps of 1/n at each zero.
struct StepCdf {
  std::vector<double> jumps;  ///< sorted jump locations, clamped to [-1, 1]
  double weight = 0.0;        ///< mass per jump
  int clamped = 0;            ///< zeros moved in from outside [-1, 1]

  double total_mass() const { return weight * static_cast<double>(jumps.size()); }
  double operator()(double x) const;
};

StepCdf zero_counting_measure(const ExtremalSolution& sol);
StepCdf zero_counting_measure(const std::vector<double>& zeros, int n);

}  // namespace gridext
