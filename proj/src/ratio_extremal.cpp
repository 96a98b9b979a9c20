#include "gridext/ratio_extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>

#include "gridext/detail/golden.hpp"
#include "gridext/detail/parallel.hpp"
#include "gridext/errors.hpp"

namespace gridext {

int degree_budget(int n, double alpha) {
  return static_cast<int>(std::floor(alpha * n + 1e-9));
}

std::shared_ptr<const BasisTable> cached_table(const Grid& g, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const BasisTable>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({g.n, d});
    if (it != cache.end()) return it->second;
  }
  // Built outside the lock; a racing duplicate is harmless.
  auto table = std::make_shared<const BasisTable>(g, d);
  std::lock_guard lock(mu);
  return cache.try_emplace({g.n, d}, std::move(table)).first->second;
}

double phi(const Grid& g, int d, double x_star) {
  PinnedOptions opts;
  opts.table = cached_table(g, d);
  return solve_pinned_max(g, d, x_star, opts).objective;
}

namespace {

struct Probe {
  double x = 0.0;
  double value = 0.0;
};

struct GapScan {
  std::vector<Probe> probes;  // ascending x
  std::size_t best = 0;
  std::vector<int> best_nodes;
  int solves = 0;
};

// A beats b: larger value, or a tie (relative 1e-9) at smaller x.
bool better(const Probe& a, const Probe& b) {
  const double tol = 1e-9 * std::max(std::abs(a.value), std::abs(b.value));
  if (std::abs(a.value - b.value) > tol) return a.value > b.value;
  return a.x < b.x;
}

GapScan scan_gap(const Grid& g, int d, int k, int m, const std::shared_ptr<const BasisTable>& table) {
  GapScan out;
  const double lo = g.points[k], hi = g.points[k + 1];
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  PinnedOptions opts;
  opts.table = table;
  for (int i = m - 1; i >= 0; --i) {
    const double x = mid + half * std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * m));
    const MinMaxSolution s = solve_pinned_max(g, d, x, opts);
    ++out.solves;
    opts.warm_nodes = s.basis_nodes;
    out.probes.push_back({x, s.objective});
    if (out.probes.size() == 1 || better(out.probes.back(), out.probes[out.best])) {
      out.best = out.probes.size() - 1;
      out.best_nodes = s.basis_nodes;
    }
  }
  return out;
}

// sup of |f| over [z - h, z + h], sampled.
double local_scale(const BasisTable& t, std::span<const double> c, double z, double h) {
  double m = 0.0, v = 0.0, s = 0.0;
  for (int i = 0; i <= 32; ++i) {
    t.ortho_eval(c, z - h + 2.0 * h * i / 32.0, v, s);
    m = std::max(m, std::abs(v));
  }
  return m;
}

ZeroSet zeros_from_expansion(const BasisTable& t, std::span<const double> c, double lo, double hi) {
  const RootSpectrum spec = t.ortho_roots(c);
  const double h = t.grid().spacing();
  ZeroSet out;
  for (double z : spec.real_roots) {
    if (z < lo || z > hi) continue;
    double v = 0.0, s = 0.0;
    t.ortho_eval(c, z, v, s);
    out.residual = std::max(out.residual, std::abs(v) / std::max(1.0, local_scale(t, c, z, h)));
    out.zeros.push_back(z);
  }
  return out;
}

}  // namespace

ExtremalSolution solve_ratio_extremal_degree(int n, int d, const RatioOptions& options) {
  if (n < 3) throw InvalidArgument("solve_ratio_extremal: n must be >= 3");
  if (d < 1) throw InvalidArgument("solve_ratio_extremal: degree budget must be >= 1");
  if (d >= n) {
    throw DegenerateProblem("solve_ratio_extremal: degree " + std::to_string(d) + " >= n = " +
                            std::to_string(n));
  }
  if (options.scan_points < 1) throw InvalidArgument("solve_ratio_extremal: scan_points must be >= 1");
  if (!(options.refine_width > 0.0)) throw InvalidArgument("solve_ratio_extremal: refine_width must be > 0");

  const Grid g = make_grid(n);
  const auto table = cached_table(g, d);
  const int gaps = n - 1;

  std::vector<GapScan> scans(gaps);
  detail::parallel_for(gaps, options.workers,
               [&](int k) { scans[k] = scan_gap(g, d, k, options.scan_points, table); });

  int solves = 0;
  std::vector<int> order(gaps);
  for (int k = 0; k < gaps; ++k) {
    order[k] = k;
    solves += scans[k].solves;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return better(scans[a].probes[scans[a].best], scans[b].probes[scans[b].best]);
  });
  const int refine = std::min(std::max(options.refine_gaps, 1), gaps);

  std::vector<Probe> refined(refine);
  std::vector<int> refine_solves(refine, 0);
  detail::parallel_for(refine, options.workers, [&](int i) {
    const GapScan& s = scans[order[i]];
    const int k = order[i];
    const double lo = s.best > 0 ? s.probes[s.best - 1].x : g.points[k];
    const double hi = s.best + 1 < s.probes.size() ? s.probes[s.best + 1].x : g.points[k + 1];
    PinnedOptions opts;
    opts.table = table;
    opts.warm_nodes = s.best_nodes;
    auto f = [&](double x) {
      const MinMaxSolution sol = solve_pinned_max(g, d, x, opts);
      opts.warm_nodes = sol.basis_nodes;
      ++refine_solves[i];
      return sol.objective;
    };
    const auto [x, v] = detail::golden_max(f, lo, hi, options.refine_width);
    refined[i] = better({x, v}, s.probes[s.best]) ? Probe{x, v} : s.probes[s.best];
  });

  Probe best = refined[0];
  for (int i = 0; i < refine; ++i) {
    solves += refine_solves[i];
    if (better(refined[i], best)) best = refined[i];
  }

  PinnedOptions opts;
  opts.table = table;
  const MinMaxSolution final_sol = solve_pinned_max(g, d, best.x, opts);
  ++solves;

  ExtremalSolution out;
  out.n = n;
  out.alpha = static_cast<double>(d) / n;
  out.degree_budget = d;
  out.x_star = best.x;
  out.phi_at_x_star = final_sol.objective;
  out.certificate_gap = final_sol.certificate_gap;
  out.lp_solves = solves;
  out.ortho_coeffs = final_sol.ortho_coeffs;
  out.table = table;
  // The LP optimum has grid norm exactly 1, so no rescaling is needed.
  out.poly = final_sol.poly;
  out.ratio = final_sol.objective;
  out.log_ratio_over_n = std::log(out.ratio) / n;
  out.zeros = zeros_from_expansion(*table, out.ortho_coeffs, -10.0, 10.0);
  for (double z : out.zeros.zeros) {
    if (std::abs(z) > 1.0) {
      out.outside_zero = z;
      break;
    }
  }
  return out;
}

ExtremalSolution solve_ratio_extremal(int n, double alpha, const RatioOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("solve_ratio_extremal: alpha must lie in (0, 1)");
  ExtremalSolution s = solve_ratio_extremal_degree(n, degree_budget(n, alpha), options);
  s.alpha = alpha;
  return s;
}

StructureReport analyze_structure(const ExtremalSolution& sol) {
  StructureReport rep;
  const Grid g = make_grid(sol.n);
  rep.gap_counts.assign(g.n - 1, 0);

  // Evaluate with the orthonormal expansion when the solution carries one;
  // otherwise fall back to the Chebyshev coefficients.
  const bool expansion = sol.table && !sol.ortho_coeffs.empty();
  const ChebPoly p = sol.poly.truncated();
  const ChebPoly dp = p.derivative();
  auto eval = [&](double x, double& v, double& slope) {
    if (expansion) {
      sol.table->ortho_eval(sol.ortho_coeffs, x, v, slope);
    } else {
      v = p(x);
      slope = dp(x);
    }
  };
  int degree = std::max(p.degree(), 0);
  RootSpectrum spec;
  if (expansion) {
    double cmax = 0.0;
    for (double c : sol.ortho_coeffs) cmax = std::max(cmax, std::abs(c));
    degree = static_cast<int>(sol.ortho_coeffs.size()) - 1;
    while (degree > 0 && !(std::abs(sol.ortho_coeffs[degree]) > ChebPoly::kTruncationTol * cmax)) --degree;
    spec = sol.table->ortho_roots(sol.ortho_coeffs);
  } else {
    spec = root_spectrum(p);
  }
  rep.degree_deficit = sol.degree_budget - degree;
  rep.complex_zeros = spec.complex_count;

  const double h = g.spacing();
  bool simple = true;
  rep.min_derivative_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> real = spec.real_roots;
  std::sort(real.begin(), real.end());
  for (std::size_t i = 0; i < real.size(); ++i) {
    const double z = real[i];
    if (i > 0 && !(real[i] > real[i - 1])) simple = false;
    // Local scale of p' near z: sup of |p| over [z - h, z + h] divided by h.
    double local = 0.0, v = 0.0, slope = 0.0;
    for (int s = 0; s <= 32; ++s) {
      eval(z - h + 2.0 * h * s / 32.0, v, slope);
      local = std::max(local, std::abs(v));
    }
    eval(z, v, slope);
    const double ratio = std::abs(slope) / std::max(local / h, 1e-300);
    rep.min_derivative_ratio = std::min(rep.min_derivative_ratio, ratio);
    if (!(ratio > 1e-8)) simple = false;

    if (z > -1.0 && z < 1.0) {
      ++rep.count_in_open_interval;
      const int k = g.gap_index(z);
      if (k >= 0 && k < g.n - 1 && z > g.points[k]) ++rep.gap_counts[k];
      else simple = false;  // a zero exactly on a node contradicts |p| = 1 there
    } else if (std::abs(z) <= 10.0 && std::abs(z) != 1.0) {
      rep.outside_zeros.push_back(z);
    }
  }
  if (real.empty()) rep.min_derivative_ratio = 0.0;
  rep.all_real_simple = simple && spec.complex_count == 0 &&
                        static_cast<int>(real.size()) == degree;
  for (int c : rep.gap_counts) rep.max_zeros_per_gap = std::max(rep.max_zeros_per_gap, c);
  const int off_interval = static_cast<int>(real.size()) - rep.count_in_open_interval;
  rep.separation_ok = rep.max_zeros_per_gap <= 1 && off_interval <= 1;
  return rep;
}

double StepCdf::operator()(double x) const {
  const auto it = std::upper_bound(jumps.begin(), jumps.end(), x);
  return weight * static_cast<double>(it - jumps.begin());
}

StepCdf zero_counting_measure(const std::vector<double>& zeros, int n) {
  if (n < 1) throw InvalidArgument("zero_counting_measure: n must be >= 1");
  StepCdf cdf;
  cdf.weight = 1.0 / n;
  for (double z : zeros) {
    if (z < -1.0 || z > 1.0) ++cdf.clamped;
    cdf.jumps.push_back(std::clamp(z, -1.0, 1.0));
  }
  std::sort(cdf.jumps.begin(), cdf.jumps.end());
  return cdf;
}

StepCdf zero_counting_measure(const ExtremalSolution& sol) {
  return zero_counting_measure(sol.zeros.zeros, sol.n);
}

}  // namespace gridext
