#include "gridext/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridext/detail/parallel.hpp"
#include "gridext/errors.hpp"
#include "gridext/minmax.hpp"

namespace gridext {

RatioOptions HarnessConfig::ratio_options() const {
  RatioOptions o;
  o.scan_points = scan_points;
  o.refine_width = refine_width;
  o.refine_gaps = refine_gaps;
  o.workers = workers;
  return o;
}

namespace {

double log_abs_product(const std::vector<double>& zeros, double x) {
  double s = 0.0;
  for (double z : zeros) s += std::log(std::abs(x - z));
  return s;
}

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument(std::string(who) + ": alpha must lie in (0, 1)");
}

void check_n_list(std::vector<int>& ns, const char* who) {
  if (ns.empty()) throw InvalidArgument(std::string(who) + ": empty n list");
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
}

}  // namespace

std::pair<double, double> log_sup_monic(const std::vector<double>& zeros, double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("log_sup_monic: need lo < hi");
  double best = log_abs_product(zeros, lo), arg = lo;
  auto consider = [&](double x) {
    const double v = log_abs_product(zeros, x);
    if (v > best) {
      best = v;
      arg = x;
    }
  };
  consider(hi);
  // Between consecutive zeros P'/P = sum 1/(x - z_i) falls from +inf to -inf
  // exactly once; that is the only local maximum of |P| there.
  for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
    double a = zeros[i], b = zeros[i + 1];
    if (b <= lo || a >= hi || !(b > a)) continue;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      double s = 0.0;
      for (double z : zeros) s += 1.0 / (mid - z);
      (s > 0.0 ? a : b) = mid;
    }
    const double x = 0.5 * (a + b);
    if (x > lo && x < hi) consider(x);
  }
  return {best, arg};
}

MonicRoute monic_route(int n, int d) {
  const Grid g = make_grid(n);
  const auto table = cached_table(g, d);
  const MinMaxSolution sol = solve_monic_min(g, d, table);
  const RootSpectrum spec = table->ortho_roots(sol.ortho_coeffs);
  if (spec.complex_count != 0 || static_cast<int>(spec.real_roots.size()) != d) {
    throw NumericFailure("monic_route: recovered " + std::to_string(spec.real_roots.size()) + " real and " +
                         std::to_string(spec.complex_count) + " complex zeros for degree " + std::to_string(d));
  }
  MonicRoute out;
  out.n = n;
  out.d = d;
  out.grid_norm = sol.objective;
  out.log_grid_norm = std::log(sol.objective);
  out.certificate_gap = sol.certificate_gap;
  out.zeros = spec.real_roots;
  out.zeros_inside = std::all_of(out.zeros.begin(), out.zeros.end(), [](double z) { return z > -1.0 && z < 1.0; });
  std::vector<int> per_gap(n - 1, 0);
  for (double z : out.zeros) {
    const int k = std::clamp(g.gap_index(z), 0, n - 2);
    ++per_gap[k];
  }
  out.max_zeros_per_gap = *std::max_element(per_gap.begin(), per_gap.end());
  const auto [ls, arg] = log_sup_monic(out.zeros);
  out.log_sup = ls;
  out.argmax = arg;
  out.value = (out.log_sup - out.log_grid_norm) / n;
  return out;
}

double ks_distance(const StepCdf& empirical, const AlphaMeasure& mu) {
  std::vector<double> points = empirical.jumps;
  points.insert(points.end(), {-1.0, 1.0, -mu.r, mu.r});
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double worst = 0.0;
  for (double x : points) {
    const double target = cdf(mu.measure, x);
    const auto below = std::lower_bound(empirical.jumps.begin(), empirical.jumps.end(), x);
    const double left = empirical.weight * static_cast<double>(below - empirical.jumps.begin());
    worst = std::max({worst, std::abs(empirical(x) - target), std::abs(left - target)});
  }
  return worst;
}

double empirical_mass(const StepCdf& empirical, double lo, double hi) {
  const auto a = std::lower_bound(empirical.jumps.begin(), empirical.jumps.end(), lo);
  const auto b = std::upper_bound(empirical.jumps.begin(), empirical.jumps.end(), hi);
  return empirical.weight * static_cast<double>(std::max<std::ptrdiff_t>(b - a, 0));
}

double zero_distribution_distance(int n, double alpha, ZeroSource source, const RatioOptions& options) {
  check_alpha(alpha, "zero_distribution_distance");
  const AlphaMeasure mu = mu_alpha(alpha);
  if (source == ZeroSource::Monic) {
    const MonicRoute m = monic_route(n, degree_budget(n, alpha));
    return ks_distance(zero_counting_measure(m.zeros, n), mu);
  }
  const ExtremalSolution s = solve_ratio_extremal(n, alpha, options);
  return ks_distance(zero_counting_measure(s), mu);
}

LinearFit fit_inverse_n(const std::vector<int>& ns, const std::vector<double>& ys) {
  if (ns.empty() || ns.size() != ys.size()) throw InvalidArgument("fit_inverse_n: need matching, nonempty lists");
  std::vector<std::size_t> idx(ns.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ns[a] > ns[b]; });
  idx.resize(std::min<std::size_t>(3, idx.size()));

  LinearFit fit;
  fit.points = static_cast<int>(idx.size());
  if (idx.size() == 1) {
    fit.a = ys[idx[0]];
    return fit;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    const double x = 1.0 / ns[i];
    sx += x;
    sy += ys[i];
    sxx += x * x;
    sxy += x * ys[i];
  }
  const double m = static_cast<double>(idx.size());
  const double det = m * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw InvalidArgument("fit_inverse_n: n values must differ");
  fit.b = (m * sxy - sx * sy) / det;
  fit.a = (sy - fit.b * sx) / m;
  double ss = 0.0;
  for (std::size_t i : idx) {
    const double e = ys[i] - (fit.a + fit.b / ns[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

namespace {

SweepReport run_sweep(double alpha, std::vector<int> n_list, bool ratio, bool monic, const RatioOptions& options) {
  check_alpha(alpha, "sweep");
  check_n_list(n_list, "sweep");
  SweepReport rep;
  rep.alpha = alpha;
  rep.route = ratio && monic ? "both" : (ratio ? "ratio" : "monic");
  rep.target = C_closed(alpha);
  const AlphaMeasure mu = mu_alpha(alpha);
  rep.rows.resize(n_list.size());

  // Rows run one after another when the ratio search itself is parallel.
  const int row_workers = ratio ? 1 : options.workers;
  detail::parallel_for(static_cast<int>(n_list.size()), row_workers, [&](int i) {
    SweepRow& row = rep.rows[i];
    row.n = n_list[i];
    row.d = degree_budget(row.n, alpha);
    if (ratio) {
      const ExtremalSolution s = solve_ratio_extremal(row.n, alpha, options);
      const StructureReport st = analyze_structure(s);
      row.ratio = s.ratio;
      row.log_ratio_over_n = s.log_ratio_over_n;
      row.structure_ok = row.structure_ok && st.all_real_simple && st.separation_ok &&
                         st.count_in_open_interval >= row.d - 1;
      row.ks_distance = ks_distance(zero_counting_measure(s), mu);
    }
    if (monic) {
      const MonicRoute m = monic_route(row.n, row.d);
      row.monic_route_value = m.value;
      row.structure_ok = row.structure_ok && m.zeros_inside && m.max_zeros_per_gap <= 1;
      row.ks_distance = ks_distance(zero_counting_measure(m.zeros, row.n), mu);
    }
  });

  std::vector<int> ns;
  std::vector<double> ys, ms;
  for (const auto& row : rep.rows) {
    ns.push_back(row.n);
    if (row.log_ratio_over_n) ys.push_back(*row.log_ratio_over_n);
    if (row.monic_route_value) ms.push_back(*row.monic_route_value);
  }
  if (ratio) {
    rep.ratio_fit = fit_inverse_n(ns, ys);
    rep.extrapolated = rep.ratio_fit->a;
    rep.rel_error = std::abs(*rep.extrapolated - rep.target) / rep.target;
  }
  if (monic) {
    rep.monic_fit = fit_inverse_n(ns, ms);
    rep.monic_extrapolated = rep.monic_fit->a;
    rep.monic_rel_error = std::abs(*rep.monic_extrapolated - rep.target) / rep.target;
  }
  return rep;
}

}  // namespace

SweepReport sweep_ratio(double alpha, std::vector<int> n_list, const RatioOptions& options) {
  return run_sweep(alpha, std::move(n_list), true, false, options);
}

SweepReport sweep_monic(double alpha, std::vector<int> n_list, int workers) {
  RatioOptions o;
  o.workers = workers;
  return run_sweep(alpha, std::move(n_list), false, true, o);
}

SweepReport sweep_both(double alpha, std::vector<int> n_list, const RatioOptions& options) {
  return run_sweep(alpha, std::move(n_list), true, true, options);
}

CRReport cr_regime(double c, std::vector<int> n_list, const RatioOptions& options) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("cr_regime: c must be positive");
  check_n_list(n_list, "cr_regime");
  CRReport rep;
  rep.c = c;
  rep.band_min = std::numeric_limits<double>::infinity();
  rep.band_max = -rep.band_min;
  for (int n : n_list) {
    CRRow row;
    row.n = n;
    row.d = static_cast<int>(std::lround(c * std::sqrt(static_cast<double>(n))));
    if (row.d < 1) throw InvalidArgument("cr_regime: round(c sqrt(n)) must be >= 1");
    const ExtremalSolution s = solve_ratio_extremal_degree(n, row.d, options);
    row.ratio = s.ratio;
    row.exponent_estimate = n * std::log(s.ratio) / (static_cast<double>(row.d) * row.d);
    rep.band_min = std::min(rep.band_min, row.exponent_estimate);
    rep.band_max = std::max(rep.band_max, row.exponent_estimate);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace gridext
