#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "gridext/errors.hpp"
#include "gridext/grid_poly.hpp"
#include "support.hpp"

using namespace gridext;

namespace {

// Chebyshev coefficients of a monomial-basis polynomial, by the
// x^k = 2^{1-k} sum binom(k, j) T_{k-2j} / (1 + [k = 2j]) identity.
std::vector<double> monomial_to_chebyshev(const std::vector<double>& m) {
  const int d = static_cast<int>(m.size()) - 1;
  std::vector<double> c(d + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    double binom = 1.0;
    for (int j = 0; 2 * j <= k; ++j) {
      const double w = std::ldexp(binom, 1 - k) * (k == 2 * j ? 0.5 : 1.0);
      c[k - 2 * j] += m[k] * w;
      binom = binom * (k - j) / (j + 1);
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("grid_poly") {

TEST_CASE("grid points are (2k - n - 1)/(n - 1) and include both endpoints") {
  const Grid g = make_grid(5);
  REQUIRE(g.points.size() == 5);
  CHECK(g.points == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(make_grid(2).points == std::vector<double>{-1.0, 1.0});
  CHECK_THROWS_AS(make_grid(1), InvalidArgument);

  const Grid h = make_grid(40);
  const auto ref = oracle::grid(40);
  for (int k = 0; k < 40; ++k) CHECK(h.points[k] == doctest::Approx(ref[k]).epsilon(1e-15));
  CHECK(h.gap_index(-1.5) == -1);
  CHECK(h.gap_index(1.0) == 39);
  CHECK(h.gap_index(h.points[7] + 1e-9) == 7);
  CHECK(h.node_near(h.points[12] + 1e-14, 1e-12) == 12);
  CHECK(h.node_near(h.points[12] + 1e-3, 1e-12) == -1);
}

TEST_CASE("Clenshaw evaluation examples") {
  CHECK(eval(ChebPoly({0.0, 0.0, 1.0}), 0.5) == doctest::Approx(-0.5));
  CHECK(eval(ChebPoly({0.0, 0.0, 0.0}), 0.3) == 0.0);
  CHECK(eval(ChebPoly({1.0, 1.0}), -1.0) == 0.0);
  // Outside [-1, 1]: T_3(2) = 4 * 8 - 3 * 2.
  CHECK(eval(ChebPoly({0.0, 0.0, 0.0, 1.0}), 2.0) == doctest::Approx(26.0));
}

TEST_CASE("evaluation agrees with a monomial-basis oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> m(1 + trial % 12);
    for (double& v : m) v = u(rng);
    const ChebPoly p(monomial_to_chebyshev(m));
    for (double x : {-1.3, -1.0, -0.37, 0.0, 0.61, 1.0, 2.2}) {
      CHECK(p(x) == doctest::Approx(oracle::horner(m, x)).epsilon(1e-12).scale(1.0));
    }
    double v = 0.0, dv = 0.0;
    p.eval_with_derivative(0.3, v, dv);
    const double fd = (oracle::horner(m, 0.3 + 1e-6) - oracle::horner(m, 0.3 - 1e-6)) / 2e-6;
    CHECK(dv == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    CHECK(p.derivative()(0.3) == doctest::Approx(dv).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("degree, truncation, leading coefficient, monomial and from_roots") {
  const ChebPoly p({1.0, 2.0, 3.0, 1e-16});
  CHECK(p.degree() == 2);
  CHECK(p.truncated().coeffs().size() == 3);
  CHECK(ChebPoly({0.0, 0.0}).degree() == -1);
  // 3 T_2 = 6 x^2 - 3.
  CHECK(p.leading_coefficient() == doctest::Approx(6.0));
  const ChebPoly x5 = ChebPoly::monomial(5);
  for (double x : {-0.9, 0.2, 0.75}) CHECK(x5(x) == doctest::Approx(std::pow(x, 5)));
  const std::vector<double> roots{-0.7, 0.1, 0.3, 0.95};
  const ChebPoly q = ChebPoly::from_roots(roots, 2.5);
  for (double x : {-1.0, -0.2, 0.5, 1.7}) CHECK(q(x) == doctest::Approx(2.5 * oracle::root_product(roots, x)));
  CHECK(q.leading_coefficient() == doctest::Approx(2.5));
  CHECK(p.scaled(-2.0)(0.4) == doctest::Approx(-2.0 * p(0.4)));
}

TEST_CASE("log-magnitude evaluation examples") {
  const LogAbs a = eval_log_abs(RootProduct{1.0, {-1.0, 1.0}}, 3.0);
  CHECK(a.log_magnitude == doctest::Approx(std::log(8.0)));
  CHECK(a.sign == 1);
  const LogAbs b = eval_log_abs(RootProduct{1.0, {0.0}}, 0.0);
  CHECK(b.log_magnitude == kLogZero);
  CHECK(b.sign == 0);
  const LogAbs c = eval_log_abs(RootProduct{1.0, {-0.5, 0.0, 0.5}}, 1.0);
  CHECK(c.log_magnitude == doctest::Approx(std::log(0.75)));
  CHECK(c.sign == 1);
  const LogAbs neg = eval_log_abs(RootProduct{-2.0, {0.5}}, 1.0);
  CHECK(neg.sign == -1);
  CHECK(neg.log_magnitude == doctest::Approx(0.0));
}

TEST_CASE("property: root-product log evaluation matches the expanded form to 1e-8") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> roots(2 + trial % 20);
    for (double& r : roots) r = u(rng);
    const double lead = 0.5 + std::abs(u(rng));
    const ChebPoly p = ChebPoly::from_roots(roots, lead);
    for (double x : {-1.0, -0.33, 0.12, 0.9, 1.5}) {
      const double direct = lead * oracle::root_product(roots, x);
      if (std::abs(direct) < 1e-250) continue;
      const LogAbs la = eval_log_abs(RootProduct{lead, roots}, x);
      CHECK(std::abs(la.log_magnitude - std::log(std::abs(direct))) <= 1e-8);
      // The expanded form itself is only accurate where |p(x)| is not tiny
      // next to its coefficients.
      double coeff_sum = 0.0;
      for (double c : p.coeffs()) coeff_sum += std::abs(c);
      if (std::abs(direct) >= 1e-6 * coeff_sum) CHECK(std::abs(la.log_magnitude - std::log(std::abs(p(x)))) <= 1e-8);
      CHECK(la.sign == (direct > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("roots_in_window examples") {
  const ZeroSet t2 = roots_in_window(ChebPoly({0.0, 0.0, 1.0}), -1.0, 1.0);
  REQUIRE(t2.zeros.size() == 2);
  CHECK(t2.zeros[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
  CHECK(t2.zeros[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(roots_in_window(ChebPoly({1.0}), -1.0, 1.0).zeros.empty());
  // (x - 0.3)(x + 0.7) = x^2 + 0.4 x - 0.21 = T_2/2 + 0.4 T_1 + 0.5 - 0.21.
  const ZeroSet q = roots_in_window(ChebPoly({0.29, 0.4, 0.5}), -1.0, 1.0);
  REQUIRE(q.zeros.size() == 2);
  CHECK(q.zeros[0] == doctest::Approx(-0.7).epsilon(1e-14));
  CHECK(q.zeros[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(q.residual < 1e-13);
  CHECK_THROWS_AS(roots_in_window(ChebPoly({1.0}), 1.0, -1.0), InvalidArgument);
  // Window filtering.
  CHECK(roots_in_window(ChebPoly({0.29, 0.4, 0.5}), 0.0, 1.0).zeros.size() == 1);
}

TEST_CASE("property: separated real roots are recovered to 1e-9 for degree up to 50") {
  // Rounding the coefficients moves a root by about eps * sum|c_j| / |p'(r)|;
  // roots for which that bound exceeds 1e-12 are not determined to 1e-9 by
  // any double-precision coefficient vector and are left out of the check.
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.98, 0.98);
  for (int d : {3, 8, 15, 25, 35, 50}) {
    CAPTURE(d);
    std::vector<double> roots;
    while (static_cast<int>(roots.size()) < d) {
      const double r = u(rng);
      if (std::all_of(roots.begin(), roots.end(), [&](double s) { return std::abs(s - r) >= 1e-3; })) {
        roots.push_back(r);
      }
    }
    std::sort(roots.begin(), roots.end());
    const ChebPoly p = ChebPoly::from_roots(roots);
    double coeff_sum = 0.0;
    for (double c : p.coeffs()) coeff_sum += std::abs(c);
    const ZeroSet z = roots_in_window(p, -1.0, 1.0);
    CHECK(std::is_sorted(z.zeros.begin(), z.zeros.end()));
    CHECK(z.zeros.size() <= roots.size());
    int checked = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      double slope = 1.0;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != i) slope *= roots[i] - roots[j];
      }
      if (std::numeric_limits<double>::epsilon() * coeff_sum / std::abs(slope) > 1e-12) continue;
      ++checked;
      double nearest = std::numeric_limits<double>::infinity();
      for (double v : z.zeros) nearest = std::min(nearest, std::abs(v - roots[i]));
      CHECK(nearest <= 1e-9);
    }
    if (d <= 8) CHECK(checked == d);
  }
}

TEST_CASE("property: well-spread separated roots are all recovered to 1e-9 up to degree 50") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (int d : {5, 20, 35, 50}) {
    CAPTURE(d);
    std::vector<double> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = -std::cos(std::numbers::pi * (i + 0.5 + jitter(rng)) / d);
    std::sort(roots.begin(), roots.end());
    const ZeroSet z = roots_in_window(ChebPoly::from_roots(roots, 0.7), -1.0, 1.0);
    REQUIRE(z.zeros.size() == roots.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) worst = std::max(worst, std::abs(z.zeros[i] - roots[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("roots agree with a sign-change bisection cross-check") {
  const std::vector<double> roots{-0.91, -0.4, -0.05, 0.2, 0.66, 0.8};
  const ChebPoly p = ChebPoly::from_roots(roots, 3.0);
  std::vector<double> bisected;
  constexpr int kCells = 3989;
  for (int i = 0; i < kCells; ++i) {
    double a = -1.0 + 2.0 * i / kCells, b = -1.0 + 2.0 * (i + 1) / kCells;
    if (p(a) * p(b) > 0.0) continue;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      (p(a) * p(m) <= 0.0 ? b : a) = m;
    }
    bisected.push_back(0.5 * (a + b));
  }
  const ZeroSet z = roots_in_window(p, -1.0, 1.0);
  REQUIRE(z.zeros.size() == bisected.size());
  for (std::size_t i = 0; i < bisected.size(); ++i) CHECK(std::abs(z.zeros[i] - bisected[i]) < 1e-12);
}

TEST_CASE("root spectrum separates real and complex roots") {
  // (x^2 + 1)(x - 0.5)
  const ChebPoly p(monomial_to_chebyshev({-0.5, 1.0, -0.5, 1.0}));
  const RootSpectrum s = root_spectrum(p);
  REQUIRE(s.real_roots.size() == 1);
  CHECK(s.real_roots[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(s.complex_count == 2);
}

TEST_CASE("sup_norm_interval examples") {
  const IntervalNorm t3 = sup_norm_interval(ChebPoly({0.0, 0.0, 0.0, 1.0}), -1.0, 1.0);
  CHECK(t3.value == doctest::Approx(1.0).epsilon(1e-14));
  const double a = t3.argmax;
  CHECK(std::min({std::abs(a - 1.0), std::abs(a + 1.0), std::abs(a - 0.5), std::abs(a + 0.5)}) < 1e-9);
  CHECK(sup_norm_interval(ChebPoly({2.0}), -1.0, 1.0).value == doctest::Approx(2.0));
  const IntervalNorm q = sup_norm_interval(ChebPoly({0.0, 0.0, 0.5}), -1.0, 1.0);
  CHECK(q.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::min({std::abs(q.argmax), std::abs(q.argmax - 1.0), std::abs(q.argmax + 1.0)}) < 1e-9);
  CHECK_THROWS_AS(sup_norm_interval(ChebPoly({1.0}), 0.5, 0.5), InvalidArgument);
}

TEST_CASE("property: sup norm is exact for degree <= 2 against calculus, 1e-12") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c0 = u(rng), c1 = u(rng), c2 = trial % 3 == 0 ? 0.0 : u(rng);
    const std::vector<double> m{c0, c1, c2};
    double expect = std::max(std::abs(oracle::horner(m, -1.0)), std::abs(oracle::horner(m, 1.0)));
    if (c2 != 0.0) {
      const double v = -c1 / (2.0 * c2);
      if (std::abs(v) < 1.0) expect = std::max(expect, std::abs(oracle::horner(m, v)));
    }
    const IntervalNorm got = sup_norm_interval(ChebPoly(monomial_to_chebyshev(m)), -1.0, 1.0);
    CHECK(std::abs(got.value - expect) <= 1e-12 * std::max(1.0, expect));
  }
}

TEST_CASE("sup norm matches a dense-sampling oracle on random polynomials") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(4 + trial);
    for (double& v : c) v = u(rng);
    const ChebPoly p(c);
    const double expect = oracle::dense_sup([&](double x) { return p(x); }, -1.0, 1.0);
    CHECK(sup_norm_interval(p, -1.0, 1.0).value == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("grid_norm examples") {
  const GridNorm t2 = grid_norm(ChebPoly({0.0, 0.0, 1.0}), make_grid(3));
  CHECK(t2.value == doctest::Approx(1.0));
  CHECK(t2.argmax_index == 0);
  CHECK(grid_norm(ChebPoly({0.0, 0.0, 0.5}), make_grid(3)).value == doctest::Approx(0.5));
  CHECK(grid_norm(ChebPoly({0.0}), make_grid(7)).value == 0.0);
}

TEST_CASE("property: grid norm never exceeds the interval sup norm") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> c(1 + trial % 15);
    for (double& v : c) v = u(rng);
    const ChebPoly p(c);
    const Grid g = make_grid(2 + trial % 30);
    CHECK(grid_norm(p, g).value <= sup_norm_interval(p, -1.0, 1.0).value * (1.0 + 1e-14));
  }
}

}  // TEST_SUITE
