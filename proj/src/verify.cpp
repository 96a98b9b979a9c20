#include "gridext/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "gridext/detail/golden.hpp"
#include "gridext/equilibrium.hpp"
#include "gridext/errors.hpp"
#include "gridext/grid_poly.hpp"
#include "gridext/io.hpp"

namespace gridext {

namespace {

constexpr double kAlphaSet[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
constexpr double kPotentialAlphas[] = {0.3, 0.5, 0.7};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

CheckResult timed(int id, const char* title, const std::function<bool(std::ostringstream&)>& body,
                  double budget_seconds = std::numeric_limits<double>::infinity()) {
  CheckResult r;
  r.criterion = id;
  r.title = title;
  std::ostringstream detail;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds >= budget_seconds) {
    r.passed = false;
    detail << "; over the " << budget_seconds << " s budget";
  }
  r.detail = detail.str();
  return r;
}

}  // namespace

const ExtremalSolution& VerifyCache::ratio(int n, int d) {
  auto it = ratio_.find({n, d});
  if (it == ratio_.end()) {
    it = ratio_.emplace(std::make_pair(n, d), solve_ratio_extremal_degree(n, d, config_.ratio_options())).first;
  }
  return it->second;
}

const MonicRoute& VerifyCache::monic(int n, int d) {
  auto it = monic_.find({n, d});
  if (it == monic_.end()) it = monic_.emplace(std::make_pair(n, d), monic_route(n, d)).first;
  return it->second;
}

const SweepReport& VerifyCache::convergence_sweep() {
  if (!sweep_) {
    sweep_ = sweep_both(0.5, std::vector<int>(std::begin(kConvergenceNs), std::end(kConvergenceNs)),
                        config_.ratio_options());
  }
  return *sweep_;
}

double lebesgue_constant(int n) {
  if (n < 2 || n > 12) throw InvalidArgument("lebesgue_constant: n must lie in [2, 12]");
  const Grid g = make_grid(n);
  auto lambda = [&](double x) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      double l = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) l *= (x - g.points[j]) / (g.points[k] - g.points[j]);
      }
      s += std::abs(l);
    }
    return s;
  };
  double best = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double a = g.points[k], b = g.points[k + 1];
    constexpr int kSamples = 200;
    double arg = a, val = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double x = a + (b - a) * i / kSamples;
      const double v = lambda(x);
      if (v > val) {
        val = v;
        arg = x;
      }
    }
    const double h = (b - a) / kSamples;
    const auto [x, v] = detail::golden_max(lambda, std::max(a, arg - h), std::min(b, arg + h), 1e-13);
    (void)x;
    best = std::max({best, val, v});
  }
  return best;
}

CheckResult check_constants(VerifyCache&) {
  return timed(1, "constant C(alpha): closed form, Taylor series and integral agree", [](std::ostringstream& d) {
    double taylor = 0.0, integral = 0.0;
    for (double a : kAlphaSet) {
      const double c = C_closed(a);
      taylor = std::max(taylor, std::abs(c - C_taylor(a, 30)));
      integral = std::max(integral, std::abs(c - C_integral(a)));
    }
    const double limit = std::abs(C_closed(1.0 - 1e-9) - std::log(2.0));
    d << "taylor " << sci(taylor) << " (<= 1e-12), integral " << sci(integral) << " (<= 1e-8), |C(1-1e-9) - log 2| "
      << sci(limit) << " (<= 1e-7)";
    return taylor <= 1e-12 && integral <= 1e-8 && limit <= 1e-7;
  }, 1.0);
}

CheckResult check_measure_identities(VerifyCache&) {
  return timed(2, "mu_alpha: arctan and arccos densities, mass, bounds", [](std::ostringstream& d) {
    double density_gap = 0.0, mass_err = 0.0, bound = 0.0;
    for (double a : kAlphaSet) {
      const AlphaMeasure mu = mu_alpha(a);
      for (int i = 0; i < 1000; ++i) {
        const double x = mu.r * (-1.0 + 2.0 * (i + 0.5) / 1000.0);
        density_gap = std::max(density_gap, std::abs(mu.density_arctan(x) - mu.density_arccos(x)));
      }
      mass_err = std::max(mass_err, std::abs(mu.measure.total_mass() - a));
      bound = std::max(bound, density_bound_violation(mu.measure));
    }
    d << "density gap " << sci(density_gap) << " (<= 1e-12), mass error " << sci(mass_err)
      << " (<= 1e-10), bound violation " << sci(bound);
    return density_gap <= 1e-12 && mass_err <= 1e-10 && bound == 0.0;
  }, 5.0);
}

CheckResult check_variational(VerifyCache&) {
  return timed(3, "potential of mu_alpha is constant on [-r, r] and maximal there", [](std::ostringstream& d) {
    double spread = 0.0, excess = -std::numeric_limits<double>::infinity();
    for (double a : kPotentialAlphas) {
      const EquilibriumData e = equilibrium_data(a, 50, 200);
      spread = std::max(spread, e.potential_on_support_spread);
      excess = std::max(excess, e.max_over_interval - e.ell_alpha);
    }
    d << "spread " << sci(spread) << " (< 1e-6), max U - ell " << sci(excess) << " (<= 1e-6)";
    return spread < 1e-6 && excess <= 1e-6;
  }, 30.0);
}

CheckResult check_endpoint_identity(VerifyCache&) {
  return timed(4, "U(r) - U(1) = C(alpha), closed derivative, I_alpha", [](std::ostringstream& d) {
    double c_err = 0.0, fd_rel = 0.0, i_err = 0.0;
    constexpr double h = 1e-4;
    for (double a : kPotentialAlphas) {
      const AlphaMeasure mu = mu_alpha(a);
      const double r = mu.r;
      c_err = std::max(c_err, std::abs(potential(mu.measure, r) - potential(mu.measure, 1.0) - C_closed(a)));
      for (int k = 0; k < 10; ++k) {
        const double x = r + (1.0 - r) * (0.2 + 0.6 * k / 9.0);
        const double fd = (potential(mu.measure, x + h) - potential(mu.measure, x - h)) / (2.0 * h);
        const double exact = potential_derivative_closed(a, x);
        fd_rel = std::max(fd_rel, std::abs(fd - exact) / std::abs(exact));
      }
      for (double x : {r + 0.25 * (1.0 - r), r + 0.75 * (1.0 - r), 1.5, 3.0}) {
        i_err = std::max(i_err, std::abs(I_alpha_closed(a, x) - I_alpha_quadrature(a, x)));
      }
    }
    d << "|U(r) - U(1) - C| " << sci(c_err) << " (<= 1e-6), derivative rel " << sci(fd_rel)
      << " (<= 1e-5), I_alpha " << sci(i_err) << " (<= 1e-7)";
    return c_err <= 1e-6 && fd_rel <= 1e-5 && i_err <= 1e-7;
  });
}

CheckResult check_small_cases(VerifyCache& cache) {
  return timed(5, "small cases: n = 3 by hand, n <= 8 against the Lebesgue function", [&](std::ostringstream& d) {
    const double monic = solve_monic_min(make_grid(3), 2).objective;
    const double ratio3 = cache.ratio(3, 2).ratio;
    double leb = 0.0;
    for (int n = 3; n <= 8; ++n) leb = std::max(leb, std::abs(cache.ratio(n, n - 1).ratio - lebesgue_constant(n)));
    d << "monic n=3 objective " << format_number(monic) << ", ratio n=3 " << format_number(ratio3)
      << ", max |ratio - Lebesgue| " << sci(leb) << " (<= 1e-8)";
    return std::abs(monic - 0.5) <= 1e-9 && std::abs(ratio3 - 1.25) <= 1e-9 && leb <= 1e-8;
  });
}

CheckResult check_zero_structure(VerifyCache& cache) {
  return timed(6, "zeros of p_n*: real, simple, separated by the grid", [&](std::ostringstream& d) {
    int failures = 0;
    for (int n : kStructureNs) {
      for (double a : kStructureAlphas) {
        const int deg = degree_budget(n, a);
        const StructureReport s = analyze_structure(cache.ratio(n, deg));
        const bool ok = s.all_real_simple && s.complex_zeros == 0 && s.count_in_open_interval >= deg - 1 &&
                        s.max_zeros_per_gap <= 1 && s.outside_zeros.size() <= 1;
        if (!ok) {
          ++failures;
          d << "n=" << n << " alpha=" << a << " fails; ";
        }
      }
    }
    d << failures << " of 9 cases fail";
    return failures == 0;
  });
}

CheckResult check_convergence(VerifyCache& cache) {
  return timed(7, "alpha = 0.5: a + b/n extrapolation over n = 40, 80, 160 reaches C(0.5)", [&](std::ostringstream& d) {
    const SweepReport& rep = cache.convergence_sweep();
    const HarnessConfig& cfg = cache.config();
    d << "target " << format_number(rep.target) << "; ratio route " << format_number(*rep.extrapolated) << " rel "
      << sci(*rep.rel_error) << " (<= " << cfg.ratio_extrapolation_rel_tol << "), fit residual "
      << sci(rep.ratio_fit->residual) << "; monic route " << format_number(*rep.monic_extrapolated) << " rel "
      << sci(*rep.monic_rel_error) << " (<= " << cfg.monic_extrapolation_rel_tol << ")";
    return *rep.rel_error <= cfg.ratio_extrapolation_rel_tol && *rep.monic_rel_error <= cfg.monic_extrapolation_rel_tol;
  });
}

CheckResult check_zero_distribution(VerifyCache& cache) {
  return timed(8, "zeros of P_n* approach mu_0.5 (Kolmogorov distance, saturated mass)", [&](std::ostringstream& d) {
    const AlphaMeasure mu = mu_alpha(0.5);
    const MonicRoute& small = cache.monic(50, degree_budget(50, 0.5));
    const MonicRoute& large = cache.monic(200, degree_budget(200, 0.5));
    const StepCdf big = zero_counting_measure(large.zeros, 200);
    const double ks50 = ks_distance(zero_counting_measure(small.zeros, 50), mu);
    const double ks200 = ks_distance(big, mu);
    const double target = cdf(mu.measure, 1.0) - cdf(mu.measure, mu.r);
    const double mass = empirical_mass(big, mu.r, 1.0);
    d << "KS n=50 " << sci(ks50) << ", n=200 " << sci(ks200) << "; mass on [r, 1] " << format_number(mass)
      << " vs " << format_number(target) << " (tol " << cache.config().saturated_mass_tol << ")";
    return ks200 < ks50 && std::abs(mass - target) <= cache.config().saturated_mass_tol;
  });
}

CheckResult check_j_functional(VerifyCache& cache) {
  return timed(9, "J(mu_alpha) = C(alpha) and J < C - margin on five competitors", [&](std::ostringstream& d) {
    const double margin = cache.config().j_margin;
    double j_err = 0.0, worst = -std::numeric_limits<double>::infinity();
    std::string worst_name;
    for (double a : kPotentialAlphas) {
      const double c = C_closed(a);
      j_err = std::max(j_err, std::abs(J_functional(mu_alpha(a).measure) - c));
      for (const auto& [name, m] : j_test_family(a)) {
        const double excess = J_functional(m) - c;
        if (excess > worst) {
          worst = excess;
          worst_name = name;
        }
      }
    }
    d << "|J(mu_alpha) - C| " << sci(j_err) << " (<= 1e-6), largest J - C over competitors " << sci(worst) << " ("
      << worst_name << ", must be < -" << margin << ")";
    return j_err <= 1e-6 && worst < -margin;
  });
}

CheckResult check_ordering(VerifyCache& cache) {
  return timed(10, "monic route <= ratio route for every computed (n, alpha)", [&](std::ostringstream& d) {
    for (int n : kStructureNs) {
      for (double a : kStructureAlphas) cache.ratio(n, degree_budget(n, a));
    }
    const double slack = cache.config().ordering_slack;
    int pairs = 0, failures = 0;
    double worst = -std::numeric_limits<double>::infinity();
    auto compare = [&](double monic, double ratio) {
      ++pairs;
      worst = std::max(worst, monic - ratio);
      if (monic > ratio + slack) ++failures;
    };
    for (const auto& [key, sol] : cache.ratio_solutions()) {
      if (key.second < 1) continue;
      compare(cache.monic(key.first, key.second).value, sol.log_ratio_over_n);
    }
    for (const auto& row : cache.convergence_sweep().rows) compare(*row.monic_route_value, *row.log_ratio_over_n);
    d << pairs << " pairs, largest monic - ratio " << sci(worst) << " (slack " << slack << ")";
    return failures == 0;
  });
}

CheckResult check_cr_regime(VerifyCache& cache) {
  return timed(11, "d = round(sqrt(n)): exponent estimates positive and finite", [&](std::ostringstream& d) {
    const CRReport rep = cr_regime(1.0, {25, 49, 100}, cache.config().ratio_options());
    bool ok = !rep.rows.empty();
    for (const auto& row : rep.rows) {
      d << "n=" << row.n << " d=" << row.d << " estimate " << format_number(row.exponent_estimate) << "; ";
      ok = ok && std::isfinite(row.exponent_estimate) && row.exponent_estimate > 0.0;
    }
    d << "band [" << sci(rep.band_min) << ", " << sci(rep.band_max) << "]";
    return ok;
  });
}

std::vector<CheckResult> run_suite(const std::string& suite, const HarnessConfig& config) {
  using Check = CheckResult (*)(VerifyCache&);
  std::vector<Check> checks;
  const bool all = suite == "all";
  if (all || suite == "identities") {
    checks.insert(checks.end(), {check_constants, check_measure_identities, check_variational,
                                 check_endpoint_identity, check_j_functional});
  }
  if (all || suite == "structure") checks.insert(checks.end(), {check_small_cases, check_zero_structure});
  if (all || suite == "convergence") {
    checks.insert(checks.end(), {check_convergence, check_zero_distribution, check_ordering, check_cr_regime});
  }
  if (checks.empty()) throw InvalidArgument("unknown suite \"" + suite + "\"");
  VerifyCache cache(config);
  std::vector<CheckResult> out;
  for (Check c : checks) out.push_back(c(cache));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.criterion < b.criterion; });
  return out;
}

std::string format_check(const CheckResult& r) {
  char head[48];
  std::snprintf(head, sizeof head, "[%s] %2d  ", r.passed ? "PASS" : "FAIL", r.criterion);
  char tail[32];
  std::snprintf(tail, sizeof tail, ", %.2f s)", r.seconds);
  return head + r.title + "  (" + r.detail + tail;
}

}  // namespace gridext
