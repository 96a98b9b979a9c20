#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace gridext {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(LpStatus s);

/// minimize c'x  subject to  A_i x <= b_i  (i not in equality_rows)
///                           A_i x  = b_i  (i in equality_rows),  x free.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<int> equality_rows;
};

struct LpOptions {
  /// Constraint rows to start from (one per variable).  Used only if the
  /// corresponding dual basis is nonsingular and feasible; otherwise the
  /// solver falls back to a phase-1 start.
  std::vector<int> initial_basis;
  int max_iterations = 50000;
  int refactor_every = 40;
};

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd x;     ///< primal solution
  Eigen::VectorXd dual;  ///< one multiplier per constraint row, A'y = -c
  double objective = 0.0;
  double gap = 0.0;  ///< |c'x + b'y|
  int iterations = 0;
  std::vector<int> basis_rows;  ///< constraint rows in the final basis
};

/// Dense simplex on the dual standard form.  Pricing is Dantzig with
/// lowest-index tie breaking; after a run of degenerate pivots it switches
/// to Bland's rule until progress resumes.  The basis inverse is refactored
/// periodically and always before optimality is declared.
LpResult lp_core(const LpProblem& problem, const LpOptions& options = {});

}  // namespace gridext
