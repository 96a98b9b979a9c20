#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gridext/grid_poly.hpp"

namespace gridext {

/// Per-(grid, degree) data shared by the pinned solves.  Immutable once
/// built, so one table can serve any number of concurrent solves.
///
/// Besides the Chebyshev values T_j(xi_k), the table holds the polynomials
/// q_0..q_d orthonormal for the counting measure on the grid, generated by a
/// three-term recurrence.  Their grid values form a matrix with orthonormal
/// columns.
class BasisTable {
 public:
  BasisTable(const Grid& g, int d);

  int n() const { return static_cast<int>(values_.rows()); }
  int degree() const { return static_cast<int>(values_.cols()) - 1; }
  const Eigen::MatrixXd& values() const { return values_; }  ///< T_j(xi_k), n x (d+1)
  const Eigen::MatrixXd& ortho() const { return ortho_; }    ///< q_j(xi_k), n x (d+1)
  const Grid& grid() const { return grid_; }

  /// q_0(x)..q_d(x) by the recurrence.
  Eigen::VectorXd ortho_row(double x) const;

  /// log of the factor that turns q_d into a monic polynomial.
  double log_monic_scale() const;

  /// sum_j c_j q_j(x) and its derivative, by the recurrence.
  void ortho_eval(std::span<const double> c, double x, double& value, double& slope) const;

  /// Zeros of sum_j c_j q_j from the eigenvalues of its comrade matrix (the
  /// Jacobi matrix with a rank-one correction in the last row), each real
  /// one Newton-polished.
  RootSpectrum ortho_roots(std::span<const double> c) const;

  /// Chebyshev coefficients of sum_j c_j q_j, by running the recurrence on
  /// Chebyshev coefficient vectors (x T_k = (T_{k-1} + T_{k+1}) / 2).
  std::vector<double> ortho_to_chebyshev(std::span<const double> c) const;

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd ortho_;
  Eigen::VectorXd a_, b_;  // q_{j+1} b_{j+1} = (x - a_j) q_j - b_j q_{j-1}
};

/// Chebyshev values T_0(x)..T_d(x).
Eigen::VectorXd chebyshev_row(double x, int d);

/// Generic discrete min-max problem:
///   minimize max_k |fixed(x_k) + sum_{j < basis_dim} c_j T_j(x_k)|
/// optionally subject to p(pin.x) = pin.value.
struct MinMaxProblem {
  struct Pin {
    double x = 0.0;
    double value = 1.0;
  };
  int basis_dim = 0;
  std::vector<double> constraint_points;
  std::optional<Pin> pin;
  std::optional<ChebPoly> fixed_part;
};

struct MinMaxSolution {
  ChebPoly poly;
  double objective = 0.0;
  /// Constraint points in the optimal LP basis (tight by complementary
  /// slackness) together with any point where |p| is within 1e-9 of the
  /// grid max, sorted.
  std::vector<int> active_set;
  std::vector<int> signs;  ///< sign of p on each active point
  std::vector<int> basis_nodes;  ///< constraint points in the final LP basis
  int iterations = 0;
  double certificate_gap = 0.0;
  /// The same polynomial in the grid-orthonormal basis q_0..q_d of the
  /// BasisTable used (empty when the solve did not use one).
  std::vector<double> ortho_coeffs;
};

MinMaxSolution solve_minmax(const MinMaxProblem& problem);

/// Monic polynomial of degree d with the least max norm on the grid.
/// Requires 1 <= d <= n - 1.  Posed in the grid-orthonormal basis of a
/// BasisTable; pass one to reuse it.
MinMaxSolution solve_monic_min(const Grid& g, int d,
                               std::shared_ptr<const BasisTable> table = nullptr);

struct PinnedOptions {
  double grid_bound = 1.0;
  /// Grid nodes (d + 1 of them) to seed the LP basis; any node set yields a
  /// feasible start.  Empty means a spread default.
  std::vector<int> warm_nodes;
  std::shared_ptr<const BasisTable> table;
};

/// max p(x_star) over deg p <= d with |p| <= grid_bound on the grid.
/// objective = grid_bound * phi_d(x_star).
MinMaxSolution solve_pinned_max(const Grid& g, int d, double x_star,
                                const PinnedOptions& options = {});

}  // namespace gridext
