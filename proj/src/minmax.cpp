#include "gridext/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "gridext/errors.hpp"
#include "gridext/lp.hpp"

namespace gridext {

Eigen::VectorXd chebyshev_row(double x, int d) {
  Eigen::VectorXd t(d + 1);
  t(0) = 1.0;
  if (d >= 1) t(1) = x;
  for (int j = 2; j <= d; ++j) t(j) = 2.0 * x * t(j - 1) - t(j - 2);
  return t;
}

BasisTable::BasisTable(const Grid& g, int d) : grid_(g) {
  if (d < 0) throw InvalidArgument("BasisTable: negative degree");
  if (d >= g.n) throw DegenerateProblem("BasisTable: degree must be below the grid size");
  const int n = g.n;
  values_.resize(n, d + 1);
  for (int k = 0; k < n; ++k) values_.row(k) = chebyshev_row(g.points[k], d).transpose();

  // Stieltjes procedure with full reorthogonalization.
  const Eigen::Map<const Eigen::VectorXd> x(g.points.data(), n);
  ortho_.resize(n, d + 1);
  a_ = Eigen::VectorXd::Zero(d + 1);
  b_ = Eigen::VectorXd::Zero(d + 1);
  ortho_.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd v = x.cwiseProduct(ortho_.col(j));
    a_(j) = ortho_.col(j).dot(v);
    v -= a_(j) * ortho_.col(j);
    if (j > 0) v -= b_(j) * ortho_.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      v -= ortho_.leftCols(j + 1) * (ortho_.leftCols(j + 1).transpose() * v);
    }
    b_(j + 1) = v.norm();
    ortho_.col(j + 1) = v / b_(j + 1);
  }
}

Eigen::VectorXd BasisTable::ortho_row(double x) const {
  const int d = degree();
  Eigen::VectorXd q(d + 1);
  q(0) = 1.0 / std::sqrt(static_cast<double>(n()));
  for (int j = 0; j < d; ++j) {
    double v = (x - a_(j)) * q(j);
    if (j > 0) v -= b_(j) * q(j - 1);
    q(j + 1) = v / b_(j + 1);
  }
  return q;
}

double BasisTable::log_monic_scale() const {
  double acc = 0.5 * std::log(static_cast<double>(n()));
  for (int j = 1; j <= degree(); ++j) acc += std::log(b_(j));
  return acc;
}

void BasisTable::ortho_eval(std::span<const double> c, double x, double& value, double& slope) const {
  const int top = std::min(static_cast<int>(c.size()) - 1, degree());
  double q_prev = 0.0, dq_prev = 0.0;
  double q = 1.0 / std::sqrt(static_cast<double>(n())), dq = 0.0;
  value = 0.0;
  slope = 0.0;
  for (int j = 0; j <= top; ++j) {
    value += c[j] * q;
    slope += c[j] * dq;
    if (j == top) break;
    const double q_next = ((x - a_(j)) * q - b_(j) * q_prev) / b_(j + 1);
    const double dq_next = (q + (x - a_(j)) * dq - b_(j) * dq_prev) / b_(j + 1);
    q_prev = q;
    dq_prev = dq;
    q = q_next;
    dq = dq_next;
  }
}

RootSpectrum BasisTable::ortho_roots(std::span<const double> c) const {
  RootSpectrum out;
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  int deg = std::min(static_cast<int>(c.size()) - 1, degree());
  while (deg > 0 && !(std::abs(c[deg]) > ChebPoly::kTruncationTol * cmax)) --deg;
  if (deg <= 0) return out;

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) {
    C(j, j) = a_(j);
    if (j + 1 < deg) {
      C(j, j + 1) = b_(j + 1);
      C(j + 1, j) = b_(j + 1);
    }
  }
  for (int j = 0; j < deg; ++j) C(deg - 1, j) -= b_(deg) * c[j] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericFailure("ortho_roots: eigenvalue iteration failed");

  const std::span<const double> cs = c.first(deg + 1);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z.real()))) {
      ++out.complex_count;
      continue;
    }
    double x = z.real(), fx = 0.0, dfx = 0.0;
    ortho_eval(cs, x, fx, dfx);
    for (int it = 0; it < 4 && dfx != 0.0; ++it) {
      const double cand = x - fx / dfx;
      double fc = 0.0, dc = 0.0;
      ortho_eval(cs, cand, fc, dc);
      if (!(std::abs(fc) < std::abs(fx))) break;
      x = cand;
      fx = fc;
      dfx = dc;
    }
    out.real_roots.push_back(x);
  }
  std::sort(out.real_roots.begin(), out.real_roots.end());
  return out;
}

std::vector<double> BasisTable::ortho_to_chebyshev(std::span<const double> c) const {
  const int top = std::min(static_cast<int>(c.size()) - 1, degree());
  if (top < 0) return {};
  using LD = long double;
  std::vector<LD> prev(top + 1, 0.0L), cur(top + 1, 0.0L), next(top + 1, 0.0L), sum(top + 1, 0.0L);
  cur[0] = 1.0L / std::sqrt(static_cast<LD>(n()));
  for (int j = 0; j <= top; ++j) {
    for (int k = 0; k <= j; ++k) sum[k] += static_cast<LD>(c[j]) * cur[k];
    if (j == top) break;
    std::fill(next.begin(), next.end(), 0.0L);
    // x * cur
    for (int k = 0; k <= j; ++k) {
      if (cur[k] == 0.0L) continue;
      if (k == 0) {
        next[1] += cur[0];
      } else {
        next[k - 1] += 0.5L * cur[k];
        next[k + 1] += 0.5L * cur[k];
      }
    }
    const LD aj = a_(j), bj = b_(j), bj1 = b_(j + 1);
    for (int k = 0; k <= j + 1; ++k) next[k] = (next[k] - aj * cur[k] - bj * prev[k]) / bj1;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return {sum.begin(), sum.end()};
}

namespace {

// Spread of d + 1 distinct node indices over 0..n-1, endpoints included.
std::vector<int> spread_nodes(int n, int d) {
  std::vector<int> s(d + 1);
  for (int i = 0; i <= d; ++i) {
    s[i] = d == 0 ? (n - 1) / 2
                  : static_cast<int>(std::lround(static_cast<double>(i) * (n - 1) / d));
  }
  return s;
}

// Largest |v| within each maximal run of constant sign; for a polynomial
// with d sign changes on the grid these are d + 1 alternation nodes.
std::vector<int> alternation_nodes(const Eigen::VectorXd& v) {
  std::vector<int> out;
  int run_sign = 0;
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    const int s = v(k) > 0 ? 1 : (v(k) < 0 ? -1 : 0);
    if (s == 0) continue;
    if (s != run_sign) {
      out.push_back(k);
      run_sign = s;
    } else if (std::abs(v(k)) > std::abs(v(out.back()))) {
      out.back() = k;
    }
  }
  return out;
}

// The d + 1 nodes closest to x; interpolation weights at x stay moderate.
std::vector<int> nearest_nodes(const Grid& g, int d, double x) {
  int left = std::clamp(g.gap_index(x), 0, g.n - 1);
  int right = left + 1;
  std::vector<int> s;
  while (static_cast<int>(s.size()) < d + 1) {
    const bool take_left =
        right >= g.n || (left >= 0 && std::abs(x - g.points[left]) <= std::abs(g.points[right] - x));
    if (take_left) s.push_back(left--);
    else s.push_back(right++);
  }
  std::sort(s.begin(), s.end());
  return s;
}

void check_certificate(const LpResult& r, double objective, const char* who) {
  if (r.status != LpStatus::Optimal) {
    throw NumericFailure(std::string(who) + ": LP " + std::string(to_string(r.status)));
  }
  if (r.gap > 1e-9 * (1.0 + std::abs(objective))) {
    throw NumericFailure(std::string(who) + ": certificate gap " + std::to_string(r.gap) +
                         " too large");
  }
}

// Active set: LP-basic points plus any point within 1e-9 of the grid max.
void fill_active_set(MinMaxSolution& s, const Eigen::VectorXd& vals,
                     const std::map<int, int>& basic_signs) {
  const double gmax = vals.size() > 0 ? vals.cwiseAbs().maxCoeff() : 0.0;
  s.active_set.clear();
  s.signs.clear();
  for (int k = 0; k < static_cast<int>(vals.size()); ++k) {
    auto it = basic_signs.find(k);
    if (it != basic_signs.end()) {
      s.active_set.push_back(k);
      s.signs.push_back(it->second);
    } else if (gmax > 0 && std::abs(vals[k]) >= (1.0 - 1e-9) * gmax) {
      s.active_set.push_back(k);
      s.signs.push_back(vals[k] > 0 ? 1 : -1);
    }
  }
}

MinMaxSolution solve_minmax_impl(const MinMaxProblem& pr, const LpOptions& lp_opts) {
  const int m = pr.basis_dim;
  const int npts = static_cast<int>(pr.constraint_points.size());
  if (m < 0) throw InvalidArgument("solve_minmax: negative basis dimension");
  for (int k = 1; k < npts; ++k) {
    if (!(pr.constraint_points[k] > pr.constraint_points[k - 1])) {
      throw InvalidArgument("solve_minmax: constraint points must be distinct and sorted");
    }
  }
  if (pr.pin) {
    for (double x : pr.constraint_points) {
      if (x == pr.pin->x) throw InvalidArgument("solve_minmax: pin lies on a constraint point");
    }
  }

  const int rows = 2 * npts + (pr.pin ? 1 : 0);
  LpProblem lp;
  lp.A = Eigen::MatrixXd::Zero(rows, m + 1);
  lp.b = Eigen::VectorXd::Zero(rows);
  lp.c = Eigen::VectorXd::Zero(m + 1);
  lp.c(m) = 1.0;  // minimize t
  for (int k = 0; k < npts; ++k) {
    const double x = pr.constraint_points[k];
    const double f = pr.fixed_part ? (*pr.fixed_part)(x) : 0.0;
    if (m > 0) {
      const Eigen::VectorXd t = chebyshev_row(x, m - 1);
      lp.A.row(k).head(m) = t.transpose();
      lp.A.row(npts + k).head(m) = -t.transpose();
    }
    lp.A(k, m) = -1.0;
    lp.A(npts + k, m) = -1.0;
    lp.b(k) = -f;
    lp.b(npts + k) = f;
  }
  if (pr.pin) {
    const int r = 2 * npts;
    if (m > 0) lp.A.row(r).head(m) = chebyshev_row(pr.pin->x, m - 1).transpose();
    lp.b(r) = pr.pin->value - (pr.fixed_part ? (*pr.fixed_part)(pr.pin->x) : 0.0);
    lp.equality_rows.push_back(r);
  }

  const LpResult res = lp_core(lp, lp_opts);
  check_certificate(res, res.status == LpStatus::Optimal ? res.objective : 0.0, "solve_minmax");

  std::vector<double> coeffs(std::max(m, pr.fixed_part ? static_cast<int>(pr.fixed_part->coeffs().size()) : 0), 0.0);
  if (pr.fixed_part) {
    for (std::size_t j = 0; j < pr.fixed_part->coeffs().size(); ++j) coeffs[j] = pr.fixed_part->coeffs()[j];
  }
  for (int j = 0; j < m; ++j) coeffs[j] += res.x(j);
  if (coeffs.empty()) coeffs.push_back(0.0);

  MinMaxSolution sol;
  sol.poly = ChebPoly(std::move(coeffs));
  sol.objective = res.objective;
  sol.iterations = res.iterations;
  sol.certificate_gap = res.gap;
  std::map<int, int> basic;
  for (int r : res.basis_rows) {
    if (r < npts) basic[r] = 1;
    else if (r < 2 * npts) basic[r - npts] = -1;
  }
  for (const auto& [k, s] : basic) sol.basis_nodes.push_back(k);
  Eigen::VectorXd vals(npts);
  for (int k = 0; k < npts; ++k) vals(k) = sol.poly(pr.constraint_points[k]);
  fill_active_set(sol, vals, basic);
  return sol;
}

}  // namespace

MinMaxSolution solve_minmax(const MinMaxProblem& problem) { return solve_minmax_impl(problem, {}); }

MinMaxSolution solve_monic_min(const Grid& g, int d, std::shared_ptr<const BasisTable> table) {
  if (d < 1) throw InvalidArgument("solve_monic_min: degree must be >= 1");
  if (d >= g.n) {
    throw DegenerateProblem("solve_monic_min: degree " + std::to_string(d) + " >= n = " +
                            std::to_string(g.n) + "; a monic polynomial vanishes on the grid");
  }
  if (!table || table->n() != g.n || table->degree() != d) {
    table = std::make_shared<const BasisTable>(g, d);
  }
  // minimize max_k |q_d(xi_k) + sum_{j<d} w_j q_j(xi_k)|, then rescale q_d
  // to monic.  Variables (w_0..w_{d-1}, t).
  const Eigen::MatrixXd& Q = table->ortho();
  const int n = g.n;
  LpProblem lp;
  lp.A.resize(2 * n, d + 1);
  lp.A.block(0, 0, n, d) = Q.leftCols(d);
  lp.A.block(n, 0, n, d) = -Q.leftCols(d);
  lp.A.col(d).setConstant(-1.0);
  lp.b.resize(2 * n);
  lp.b.head(n) = -Q.col(d);
  lp.b.tail(n) = Q.col(d);
  lp.c = Eigen::VectorXd::Zero(d + 1);
  lp.c(d) = 1.0;

  // Divided-difference weights on any d + 1 nodes alternate in sign, so any
  // node set with alternating signs is a feasible start.  The alternation
  // nodes of q_d give a well-conditioned one.
  LpOptions opts;
  std::vector<int> nodes = alternation_nodes(Q.col(d));
  if (static_cast<int>(nodes.size()) != d + 1) nodes = spread_nodes(n, d);
  for (int i = 0; i <= d; ++i) {
    const bool positive = ((d - i) % 2) == 0;
    opts.initial_basis.push_back(positive ? nodes[i] : n + nodes[i]);
  }
  const LpResult res = lp_core(lp, opts);
  check_certificate(res, res.status == LpStatus::Optimal ? res.objective : 0.0, "solve_monic_min");

  const double scale = std::exp(table->log_monic_scale());
  const Eigen::VectorXd grid_values = scale * (Q.col(d) + Q.leftCols(d) * res.x.head(d));
  MinMaxSolution sol;
  sol.ortho_coeffs.assign(d + 1, 0.0);
  for (int j = 0; j < d; ++j) sol.ortho_coeffs[j] = scale * res.x(j);
  sol.ortho_coeffs[d] = scale;
  sol.poly = ChebPoly(table->ortho_to_chebyshev(sol.ortho_coeffs));
  sol.objective = scale * res.objective;
  sol.iterations = res.iterations;
  sol.certificate_gap = scale * res.gap;
  std::map<int, int> basic;
  for (int r : res.basis_rows) basic[r < n ? r : r - n] = r < n ? 1 : -1;
  for (const auto& [k, s] : basic) sol.basis_nodes.push_back(k);
  fill_active_set(sol, grid_values, basic);
  return sol;
}

MinMaxSolution solve_pinned_max(const Grid& g, int d, double x_star, const PinnedOptions& options) {
  if (d < 0) throw InvalidArgument("solve_pinned_max: negative degree");
  if (d >= g.n) {
    throw DegenerateProblem("solve_pinned_max: degree " + std::to_string(d) + " >= n = " +
                            std::to_string(g.n) + " makes the LP unbounded");
  }
  if (!(x_star >= -1.0 && x_star <= 1.0)) {
    throw InvalidArgument("solve_pinned_max: x_star must lie in [-1, 1]");
  }
  if (g.node_near(x_star, 0.0) >= 0) {
    throw InvalidArgument("solve_pinned_max: x_star is a grid point");
  }
  if (!(options.grid_bound > 0.0)) throw InvalidArgument("solve_pinned_max: grid_bound must be > 0");

  std::shared_ptr<const BasisTable> table = options.table;
  if (!table || table->n() != g.n || table->degree() != d) {
    table = std::make_shared<const BasisTable>(g, d);
  }
  // The LP is posed in the grid-orthonormal basis, where the constraint
  // matrix has orthonormal columns; Chebyshev coefficients are recovered at
  // the end.
  const Eigen::MatrixXd& Q = table->ortho();
  const int n = g.n;

  LpProblem lp;
  lp.A.resize(2 * n, d + 1);
  lp.A.topRows(n) = Q;
  lp.A.bottomRows(n) = -Q;
  lp.b = Eigen::VectorXd::Constant(2 * n, options.grid_bound);
  const Eigen::VectorXd qx = table->ortho_row(x_star);
  lp.c = -qx;

  // Any d + 1 distinct nodes form a feasible basis once each node's sign is
  // taken from its interpolation weight at x_star.
  std::vector<int> nodes = options.warm_nodes;
  if (static_cast<int>(nodes.size()) != d + 1) nodes = nearest_nodes(g, d, x_star);
  Eigen::MatrixXd S(d + 1, d + 1);
  for (int i = 0; i <= d; ++i) S.col(i) = Q.row(nodes[i]).transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
  const Eigen::VectorXd w = lu.solve(qx);
  LpOptions opts;
  for (int i = 0; i <= d; ++i) opts.initial_basis.push_back(w(i) >= 0 ? nodes[i] : n + nodes[i]);

  const LpResult res = lp_core(lp, opts);
  const double objective = res.status == LpStatus::Optimal ? -res.objective : 0.0;
  check_certificate(res, objective, "solve_pinned_max");

  MinMaxSolution sol;
  const Eigen::VectorXd grid_values = Q * res.x;
  sol.ortho_coeffs.assign(res.x.data(), res.x.data() + res.x.size());
  sol.poly = ChebPoly(table->ortho_to_chebyshev(sol.ortho_coeffs));
  sol.objective = objective;
  sol.iterations = res.iterations;
  sol.certificate_gap = res.gap;
  std::map<int, int> basic;
  for (int r : res.basis_rows) basic[r < n ? r : r - n] = r < n ? 1 : -1;
  for (const auto& [k, s] : basic) sol.basis_nodes.push_back(k);
  fill_active_set(sol, grid_values, basic);
  return sol;
}

}  // namespace gridext
