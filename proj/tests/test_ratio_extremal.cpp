#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridext/errors.hpp"
#include "gridext/grid_poly.hpp"
#include "gridext/minmax.hpp"
#include "gridext/ratio_extremal.hpp"
#include "support.hpp"

using namespace gridext;

namespace {

// phi_d(x) as 1 / min { grid norm of p : p(x) = 1 }, posed directly in the
// Chebyshev basis; a different LP from the one the solver uses.
double phi_by_pinned_minimum(const Grid& g, int d, double x) {
  MinMaxProblem prob;
  prob.basis_dim = d + 1;
  prob.constraint_points = g.points;
  prob.pin = MinMaxProblem::Pin{x, 1.0};
  return 1.0 / solve_minmax(prob).objective;
}

double dense_scan_maximum(int n, int d, int samples) {
  const Grid g = make_grid(n);
  std::vector<std::pair<double, double>> vals;
  for (int i = 0; i < samples; ++i) {
    const double x = -1.0 + 2.0 * (i + 0.5) / samples;
    if (g.node_near(x, 1e-12) >= 0) continue;
    vals.emplace_back(phi_by_pinned_minimum(g, d, x), x);
  }
  std::sort(vals.rbegin(), vals.rend());
  double best = vals.front().first;
  const double h = 2.0 / samples;
  for (int k = 0; k < 3; ++k) {
    double lo = vals[k].second - h, hi = vals[k].second + h;
    const int gap = g.gap_index(vals[k].second);
    lo = std::max(lo, g.points[gap] + 1e-12);
    hi = std::min(hi, g.points[gap + 1] - 1e-12);
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (phi_by_pinned_minimum(g, d, m1) < phi_by_pinned_minimum(g, d, m2)) lo = m1;
      else hi = m2;
    }
    best = std::max(best, phi_by_pinned_minimum(g, d, 0.5 * (lo + hi)));
  }
  return best;
}

}  // namespace

TEST_SUITE("ratio_extremal") {

TEST_CASE("degree budget is floor(alpha n) without rounding slips") {
  CHECK(degree_budget(70, 0.7) == 49);
  CHECK(degree_budget(3, 2.0 / 3.0) == 2);
  CHECK(degree_budget(40, 0.5) == 20);
  CHECK(degree_budget(10, 0.29) == 2);
  CHECK(degree_budget(100, 0.07) == 7);
}

TEST_CASE("phi examples") {
  CHECK(phi(make_grid(3), 2, 0.5) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(phi(make_grid(2), 1, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  const Grid g5 = make_grid(5);
  CHECK(phi(g5, 2, 0.5 + 1e-6) <= 1.0 + 1e-3);
  CHECK(phi(g5, 2, 0.5 + 1e-6) >= 1.0);
}

TEST_CASE("n = 3, alpha = 2/3: ratio 1.25 at x* = -0.5 (the smaller of the symmetric pair)") {
  const ExtremalSolution s = solve_ratio_extremal(3, 2.0 / 3.0);
  CHECK(s.degree_budget == 2);
  CHECK(s.ratio == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(s.x_star == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(s.log_ratio_over_n == doctest::Approx(std::log(1.25) / 3.0).epsilon(1e-9));
}

TEST_CASE("degree 1 gives ratio 1") {
  const ExtremalSolution s = solve_ratio_extremal(5, 0.2);
  CHECK(s.degree_budget == 1);
  CHECK(s.ratio == doctest::Approx(1.0).epsilon(1e-12));
  const StructureReport st = analyze_structure(s);
  CHECK(st.separation_ok);
  CHECK(st.max_zeros_per_gap <= 1);
}

TEST_CASE("n = 40, alpha = 0.5 matches a 2000-point dense scan with independent LP solves") {
  const ExtremalSolution s = solve_ratio_extremal(40, 0.5);
  const double oracle_value = dense_scan_maximum(40, 20, 2000);
  CHECK(std::abs(s.ratio - oracle_value) <= 1e-6 * oracle_value);
}

TEST_CASE("n = 40, alpha = 0.5 structure") {
  const ExtremalSolution s = solve_ratio_extremal(40, 0.5);
  const StructureReport st = analyze_structure(s);
  CHECK(st.all_real_simple);
  CHECK(st.count_in_open_interval >= 19);
  CHECK(st.max_zeros_per_gap == 1);
  CHECK(st.separation_ok);
  CHECK(st.outside_zeros.size() <= 1);
  CHECK(st.complex_zeros == 0);
  CHECK(st.gap_counts.size() == 39);
}

TEST_CASE("n = 3 structure: one zero inside, one outside") {
  const StructureReport st = analyze_structure(solve_ratio_extremal(3, 2.0 / 3.0));
  CHECK(st.all_real_simple);
  CHECK(st.count_in_open_interval == 1);
  REQUIRE(st.outside_zeros.size() == 1);
  CHECK(std::abs(std::abs(st.outside_zeros[0]) - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-9);
  CHECK(st.separation_ok);
}

TEST_CASE("property: solution invariants over a small (n, alpha) matrix") {
  for (int n : {10, 20, 31}) {
    for (double a : {0.2, 0.45, 0.7}) {
      CAPTURE(n);
      CAPTURE(a);
      const ExtremalSolution s = solve_ratio_extremal(n, a);
      CHECK(s.ratio >= 1.0);
      CHECK(std::abs(std::abs(s.poly(s.x_star)) - s.ratio) <= 1e-9 * s.ratio);
      // Grid values of the Chebyshev form carry about ratio * 2^-52 of rounding.
      if (s.ratio * 0x1p-52 <= 1e-12) CHECK(std::abs(grid_norm(s.poly, make_grid(n)).value - 1.0) <= 1e-12);
      CHECK(std::is_sorted(s.zeros.zeros.begin(), s.zeros.zeros.end()));
      CHECK(std::adjacent_find(s.zeros.zeros.begin(), s.zeros.zeros.end()) == s.zeros.zeros.end());
      CHECK(s.log_ratio_over_n <= std::log(2.0) + 0.05);
      const StructureReport st = analyze_structure(s);
      CHECK(st.all_real_simple);
      CHECK(st.count_in_open_interval >= s.degree_budget - 1);
      CHECK(st.max_zeros_per_gap <= 1);
      CHECK(st.outside_zeros.size() <= 1);
      CHECK(s.certificate_gap <= 1e-9 * (1.0 + s.ratio));
    }
  }
}

TEST_CASE("property: ratio is nondecreasing in the degree") {
  double prev = 1.0;
  for (int d = 1; d <= 12; ++d) {
    const double r = solve_ratio_extremal_degree(20, d).ratio;
    CHECK(r >= prev * (1.0 - 1e-10));
    prev = r;
  }
}

TEST_CASE("property: the maximizer comes in a symmetric pair") {
  const ExtremalSolution s = solve_ratio_extremal(24, 0.5);
  const Grid g = make_grid(24);
  CHECK(phi(g, s.degree_budget, -s.x_star) == doctest::Approx(s.ratio).epsilon(1e-10));
  CHECK(s.x_star <= 0.0);
}

TEST_CASE("property: d = n - 1 ratio equals the Lebesgue constant by sign-pattern oracle") {
  for (int n = 3; n <= 8; ++n) {
    const auto xs = oracle::grid(n);
    const double lebesgue = oracle::dense_sup(
        [&](double x) {
          double s = 0.0;
          for (std::size_t k = 0; k < xs.size(); ++k) {
            double l = 1.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
              if (j != k) l *= (x - xs[j]) / (xs[k] - xs[j]);
            }
            s += std::abs(l);
          }
          return s;
        },
        -1.0, 1.0);
    const ExtremalSolution s = solve_ratio_extremal_degree(n, n - 1);
    CHECK(std::abs(s.ratio - lebesgue) <= 1e-8);
    CHECK(oracle::sign_pattern_max(xs, s.x_star) == doctest::Approx(s.ratio).epsilon(1e-10));
  }
}

TEST_CASE("Coppersmith-Rivlin form: n log(ratio) / d^2 is positive and finite") {
  for (auto [n, d] : {std::pair{16, 4}, std::pair{36, 6}, std::pair{50, 7}}) {
    const double r = solve_ratio_extremal_degree(n, d).ratio;
    const double e = n * std::log(r) / (d * d);
    CHECK(std::isfinite(e));
    CHECK(e > 0.0);
  }
}

TEST_CASE("parallel scan gives the same answer as the serial one") {
  RatioOptions serial, parallel;
  parallel.workers = 4;
  const ExtremalSolution a = solve_ratio_extremal(30, 0.4, serial);
  const ExtremalSolution b = solve_ratio_extremal(30, 0.4, parallel);
  CHECK(a.ratio == b.ratio);
  CHECK(a.x_star == b.x_star);
  CHECK(a.poly.coeffs() == b.poly.coeffs());
}

TEST_CASE("zero counting measure") {
  const StepCdf f = zero_counting_measure(std::vector<double>{-0.5, 0.5}, 3);
  CHECK(f(-0.6) == 0.0);
  CHECK(f(-0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(f(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(f(0.5) == doctest::Approx(2.0 / 3.0));
  const StepCdf empty = zero_counting_measure(std::vector<double>{}, 10);
  CHECK(empty(0.3) == 0.0);
  CHECK(empty.total_mass() == 0.0);
  const StepCdf clamp = zero_counting_measure(std::vector<double>{-1.4, 0.2}, 4);
  CHECK(clamp.clamped == 1);
  CHECK(clamp(-1.0) == doctest::Approx(0.25));

  const ExtremalSolution s = solve_ratio_extremal(40, 0.5);
  const StepCdf nu = zero_counting_measure(s);
  CHECK(nu.total_mass() == doctest::Approx(20.0 / 40.0));
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(solve_ratio_extremal(2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(solve_ratio_extremal(10, 0.05), InvalidArgument);
  CHECK_THROWS_AS(solve_ratio_extremal_degree(5, 5), DegenerateProblem);
}

}  // TEST_SUITE
