#include "gridext/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridext/errors.hpp"

namespace gridext {

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

// The dual of the caller's problem in standard form:
//   minimize  sum_j cost_j y_j   subject to  sum_j col_j y_j = g,  y >= 0,
// with one column per inequality row and two (+/-) per equality row.  The
// caller's x is recovered from the simplex multipliers.
class DualSimplex {
 public:
  DualSimplex(const LpProblem& p, const LpOptions& o) : opts_(o) {
    m_ = static_cast<int>(p.A.cols());
    rows_ = static_cast<int>(p.A.rows());
    b_ = p.b;
    M_ = p.A.transpose();
    g_ = -p.c;
    flip_ = Eigen::VectorXd::Ones(m_);
    for (int r = 0; r < m_; ++r) {
      if (g_(r) < 0) {
        flip_(r) = -1.0;
        g_(r) = -g_(r);
        M_.row(r) *= -1.0;
      }
    }
    absM_ = M_.cwiseAbs();
    std::vector<bool> eq(rows_, false);
    for (int r : p.equality_rows) {
      if (r < 0 || r >= rows_) throw InvalidArgument("lp_core: equality row out of range");
      eq[r] = true;
    }
    for (int i = 0; i < rows_; ++i) {
      cols_.push_back({i, 1});
      if (eq[i]) cols_.push_back({i, -1});
    }
    ncols_ = static_cast<int>(cols_.size());
    in_basis_.assign(ncols_ + m_, false);
  }

  LpResult run() {
    LpResult res;
    if (!try_warm_start()) {
      basis_.resize(m_);
      for (int r = 0; r < m_; ++r) {
        basis_[r] = ncols_ + r;
        in_basis_[ncols_ + r] = true;
      }
      phase_ = 1;
      refactor();
      const LpStatus s1 = iterate();
      if (s1 != LpStatus::Optimal) {
        res.status = s1 == LpStatus::Unbounded ? LpStatus::Infeasible : s1;
        res.iterations = iterations_;
        return res;
      }
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= ncols_) infeas += std::max(0.0, xB_(i));
      }
      if (infeas > 1e-9 * std::max(1.0, g_.lpNorm<Eigen::Infinity>())) {
        // No dual feasible point: the caller's objective is unbounded below.
        res.status = LpStatus::Unbounded;
        res.iterations = iterations_;
        return res;
      }
      drive_out_artificials();
    }
    phase_ = 2;
    refactor();
    LpStatus s2 = iterate();
    for (int round = 0; round < 5 && s2 == LpStatus::Optimal && !basis_feasible(); ++round) {
      if (!restore_feasibility()) break;
      s2 = iterate();
    }
    res.iterations = iterations_;
    if (s2 != LpStatus::Optimal) {
      // An unbounded dual ray certifies an infeasible primal.
      res.status = s2 == LpStatus::Unbounded ? LpStatus::Infeasible : s2;
      return res;
    }
    finish(res);
    return res;
  }

  /// True if the final basis, freshly factored, is still feasible.  Rounding
  /// in the product-form updates can push an ill-conditioned basis off the
  /// feasible set without the pricing step noticing.
  bool basis_feasible() const {
    if (m_ == 0) return true;
    return xB_.minCoeff() >= -kFeasTol * std::max(1.0, xB_.lpNorm<Eigen::Infinity>());
  }

 private:
  struct Column {
    int row;
    int sign;
  };

  // Final basic values must be nonnegative to this relative accuracy.  Basic
  // values span many orders of magnitude here, and a small one with the
  // wrong sign is a genuinely wrong vertex.
  static constexpr double kFeasTol = 1e-12;

  Eigen::VectorXd column(int j) const {
    if (j >= ncols_) return Eigen::VectorXd::Unit(m_, j - ncols_);
    return cols_[j].sign * M_.col(cols_[j].row);
  }

  double cost(int j) const {
    if (j >= ncols_) return phase_ == 1 ? 1.0 : 0.0;
    return phase_ == 1 ? 0.0 : cols_[j].sign * b_(cols_[j].row);
  }

  bool try_warm_start() {
    const auto& hint = opts_.initial_basis;
    if (static_cast<int>(hint.size()) != m_ || m_ == 0) return false;
    std::vector<int> cand;
    std::vector<bool> seen(ncols_, false);
    for (int row : hint) {
      if (row < 0 || row >= rows_) return false;
      int j = -1;
      for (int k = 0; k < ncols_; ++k) {
        if (cols_[k].row == row && cols_[k].sign == 1) {
          j = k;
          break;
        }
      }
      if (j < 0 || seen[j]) return false;
      seen[j] = true;
      cand.push_back(j);
    }
    Eigen::MatrixXd B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = column(cand[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    if (!(lu.rcond() > 1e-15)) return false;
    Eigen::VectorXd x = lu.solve(g_);
    const double tol = 1e-10 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if ((x.array() < -tol).any()) return false;
    basis_ = cand;
    for (int j : cand) in_basis_[j] = true;
    return true;
  }

  void refactor() {
    Eigen::MatrixXd B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = column(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Binv_ = lu.inverse();
    xB_ = refined_solve(lu, B, g_);
    since_refactor_ = 0;
  }

  // Returns Optimal when no improving column remains.
  LpStatus iterate() {
    int degenerate_run = 0;
    bool bland = false;
    bool verified = false;
    Eigen::VectorXd cB(m_);
    while (true) {
      if (iterations_ >= opts_.max_iterations) return LpStatus::IterationLimit;
      if (m_ == 0) return LpStatus::Optimal;
      for (int i = 0; i < m_; ++i) cB(i) = cost(basis_[i]);
      const Eigen::VectorXd pi = Binv_.transpose() * cB;
      const Eigen::VectorXd Mpi = M_.transpose() * pi;
      const Eigen::VectorXd scale = absM_.transpose() * pi.cwiseAbs();

      int enter = -1;
      double best = 0.0;
      double enter_rc = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[j]) continue;
        const Column& c = cols_[j];
        const double rc = cost(j) - c.sign * Mpi(c.row);
        const double tol = (bland ? 1e-9 : 1e-11) * (std::abs(cost(j)) + scale(c.row)) + 1e-300;
        if (rc >= -tol) continue;
        if (bland) {
          enter = j;
          enter_rc = rc;
          break;
        }
        if (enter < 0 || rc < best) {
          enter = j;
          best = rc;
          enter_rc = rc;
        }
      }
      if (enter < 0) {
        if (verified || since_refactor_ == 0) return LpStatus::Optimal;
        refactor();
        verified = true;
        continue;
      }
      verified = false;

      const Eigen::VectorXd u = Binv_ * column(enter);
      const double umax = u.lpNorm<Eigen::Infinity>();
      const double piv_tol = 1e-9 * std::max(umax, 1e-300);
      // Harris two-pass ratio test: bound the step with a small feasibility
      // allowance, then take the largest pivot among rows that bound it.  In
      // Bland mode the lowest basic index wins among acceptable pivots.
      const double feas_tol = 1e-9 * std::max(1.0, xB_.lpNorm<Eigen::Infinity>());
      double theta_max = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (u(i) > piv_tol) theta_max = std::min(theta_max, (std::max(xB_(i), 0.0) + feas_tol) / u(i));
      }
      int leave = -1;
      double best_u = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (u(i) > piv_tol && std::max(xB_(i), 0.0) / u(i) <= theta_max) best_u = std::max(best_u, u(i));
      }
      for (int i = 0; i < m_; ++i) {
        if (u(i) <= piv_tol || std::max(xB_(i), 0.0) / u(i) > theta_max) continue;
        if (bland) {
          if (u(i) >= 1e-3 * best_u && (leave < 0 || basis_[i] < basis_[leave])) leave = i;
        } else if (leave < 0 || u(i) > u(leave)) {
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      const double theta = std::max(xB_(leave), 0.0) / u(leave);

      // A step counts as progress only if the objective drops by more than
      // rounding; otherwise near-degenerate pivots can cycle.
      const double objective = cB.dot(xB_);
      if (theta * -enter_rc <= 1e-12 * (1.0 + std::abs(objective))) {
        if (++degenerate_run > 30) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      xB_ -= theta * u;
      xB_(leave) = theta;
      const double piv = u(leave);
      Binv_.row(leave) /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i != leave && u(i) != 0.0) Binv_.row(i) -= u(i) * Binv_.row(leave);
      }
      in_basis_[basis_[leave]] = false;
      basis_[leave] = enter;
      in_basis_[enter] = true;
      ++iterations_;
      if (++since_refactor_ >= opts_.refactor_every) refactor();
    }
  }

  // Dual simplex pivots on the current basis: drive negative basic values
  // out while keeping reduced costs (approximately) nonnegative.  Used when
  // skipped tiny pivots have left the final basis slightly infeasible.
  bool restore_feasibility() {
    Eigen::VectorXd cB(m_);
    for (int step = 0; step < 10 * m_ + 100; ++step) {
      refactor();
      Eigen::Index r = 0;
      const double worst = xB_.minCoeff(&r);
      if (worst >= -kFeasTol * std::max(1.0, xB_.lpNorm<Eigen::Infinity>())) return true;
      for (int i = 0; i < m_; ++i) cB(i) = cost(basis_[i]);
      const Eigen::VectorXd pi = Binv_.transpose() * cB;
      const Eigen::VectorXd Mpi = M_.transpose() * pi;
      const Eigen::RowVectorXd rowM = Binv_.row(r) * M_;
      const double amax = rowM.lpNorm<Eigen::Infinity>();
      int enter = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[j]) continue;
        const double a = cols_[j].sign * rowM(cols_[j].row);
        if (a >= -1e-9 * amax) continue;
        const double rc = std::max(cost(j) - cols_[j].sign * Mpi(cols_[j].row), 0.0);
        const double ratio = rc / -a;
        if (ratio < best) {
          best = ratio;
          enter = j;
        }
      }
      if (enter < 0) return false;
      in_basis_[basis_[r]] = false;
      basis_[r] = enter;
      in_basis_[enter] = true;
      ++iterations_;
    }
    return false;
  }

  // Pivot zero-level artificials out where a real column can replace them.
  // Rows where none can are redundant; their artificial stays basic at zero.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < ncols_) continue;
      const Eigen::RowVectorXd rowM = Binv_.row(i) * M_;
      int best = -1;
      double best_abs = 1e-9 * std::max(1.0, rowM.lpNorm<Eigen::Infinity>());
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[j]) continue;
        const double v = std::abs(cols_[j].sign * rowM(cols_[j].row));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best < 0) continue;
      in_basis_[basis_[i]] = false;
      basis_[i] = best;
      in_basis_[best] = true;
      refactor();
    }
  }

  void finish(LpResult& res) {
    // Fresh factorizations for the reported solution.
    Eigen::MatrixXd B(m_, m_);
    Eigen::VectorXd cB(m_);
    for (int i = 0; i < m_; ++i) {
      B.col(i) = column(basis_[i]);
      cB(i) = cost(basis_[i]);
    }
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(m_);
    Eigen::VectorXd yB = Eigen::VectorXd::Zero(m_);
    if (m_ > 0) {
      const Eigen::MatrixXd Bt = B.transpose();
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      Eigen::PartialPivLU<Eigen::MatrixXd> luT(Bt);
      yB = refined_solve(lu, B, g_);
      pi = refined_solve(luT, Bt, cB);
    }
    res.x = flip_.cwiseProduct(pi);
    res.dual = Eigen::VectorXd::Zero(rows_);
    res.basis_rows.clear();
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j >= ncols_) continue;
      res.dual(cols_[j].row) += cols_[j].sign * std::max(yB(i), 0.0);
      res.basis_rows.push_back(cols_[j].row);
    }
    // c'x = -g'pi, since c = -flip .* g and x = flip .* pi.
    long double primal = 0.0L, dual_obj = 0.0L;
    for (int i = 0; i < m_; ++i) primal -= static_cast<long double>(g_(i)) * pi(i);
    for (int r = 0; r < rows_; ++r) dual_obj += static_cast<long double>(b_(r)) * res.dual(r);
    res.objective = static_cast<double>(primal);
    res.gap = static_cast<double>(std::abs(primal + dual_obj));
    res.status = LpStatus::Optimal;
  }

  // LU solve followed by two refinement steps with extended-precision
  // residuals; the bases here can be badly conditioned.
  static Eigen::VectorXd refined_solve(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                                       const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = lu.solve(rhs);
    const auto n = A.rows();
    Eigen::VectorXd r(n);
    for (int step = 0; step < 2; ++step) {
      for (Eigen::Index i = 0; i < n; ++i) {
        long double acc = rhs(i);
        for (Eigen::Index j = 0; j < n; ++j) acc -= static_cast<long double>(A(i, j)) * x(j);
        r(i) = static_cast<double>(acc);
      }
      x += lu.solve(r);
    }
    return x;
  }

  LpOptions opts_;
  int m_ = 0, rows_ = 0, ncols_ = 0;
  Eigen::VectorXd b_, g_, flip_;
  Eigen::MatrixXd M_, absM_;
  std::vector<Column> cols_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd xB_;
  int phase_ = 2;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

LpResult lp_core(const LpProblem& problem, const LpOptions& options) {
  const auto m = problem.A.cols();
  if (problem.b.size() != problem.A.rows() || problem.c.size() != m) {
    throw InvalidArgument("lp_core: dimension mismatch");
  }
  if (!problem.A.allFinite() || !problem.b.allFinite() || !problem.c.allFinite()) {
    throw InvalidArgument("lp_core: non-finite input");
  }
  DualSimplex solver(problem, options);
  LpResult res = solver.run();
  if (res.status != LpStatus::Optimal || solver.basis_feasible()) return res;

  // Retry from a cold start with frequent refactoring.
  LpOptions careful = options;
  careful.initial_basis.clear();
  careful.refactor_every = std::min(options.refactor_every, 5);
  DualSimplex retry(problem, careful);
  LpResult second = retry.run();
  second.iterations += res.iterations;
  return second;
}

}  // namespace gridext
