#include "gridext/grid_poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gridext/detail/golden.hpp"
#include "gridext/errors.hpp"

namespace gridext {

int Grid::gap_index(double x) const {
  if (x < points.front()) return -1;
  if (x >= points.back()) return n - 1;
  auto it = std::upper_bound(points.begin(), points.end(), x);
  return static_cast<int>(it - points.begin()) - 1;
}

int Grid::node_near(double x, double tol) const {
  int k = gap_index(x);
  for (int j : {k, k + 1}) {
    if (j >= 0 && j < n && std::abs(points[j] - x) <= tol) return j;
  }
  return -1;
}

Grid make_grid(int n) {
  if (n < 2) throw InvalidArgument("make_grid: n must be >= 2, got " + std::to_string(n));
  Grid g;
  g.n = n;
  g.points.resize(n);
  for (int k = 1; k <= n; ++k) {
    g.points[k - 1] = static_cast<double>(2 * k - n - 1) / static_cast<double>(n - 1);
  }
  return g;
}

// ---------------------------------------------------------------------------

ChebPoly::ChebPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

int ChebPoly::degree() const {
  double cmax = 0.0;
  for (double c : coeffs_) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return -1;
  const double cut = kTruncationTol * cmax;
  for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j) {
    if (std::abs(coeffs_[j]) > cut) return j;
  }
  return -1;
}

double ChebPoly::operator()(double x) const {
  double b1 = 0.0, b2 = 0.0;
  const double two_x = 2.0 * x;
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  const double c0 = coeffs_.empty() ? 0.0 : coeffs_[0];
  return c0 + x * b1 - b2;
}

void ChebPoly::eval_with_derivative(double x, double& value, double& slope) const {
  double b1 = 0.0, b2 = 0.0, d1 = 0.0, d2 = 0.0;
  const double two_x = 2.0 * x;
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + two_x * b1 - b2;
    const double d0 = 2.0 * b1 + two_x * d1 - d2;
    b2 = b1;
    b1 = b0;
    d2 = d1;
    d1 = d0;
  }
  const double c0 = coeffs_.empty() ? 0.0 : coeffs_[0];
  value = c0 + x * b1 - b2;
  slope = b1 + x * d1 - d2;
}

ChebPoly ChebPoly::derivative() const {
  const int d = static_cast<int>(coeffs_.size()) - 1;
  if (d <= 0) return ChebPoly({0.0});
  std::vector<double> dc(d + 2, 0.0);
  for (int k = d; k >= 1; --k) dc[k - 1] = dc[k + 1] + 2.0 * k * coeffs_[k];
  dc[0] *= 0.5;
  dc.resize(d);
  return ChebPoly(std::move(dc));
}

ChebPoly ChebPoly::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return ChebPoly(std::move(c));
}

ChebPoly ChebPoly::truncated() const {
  const int d = degree();
  if (d < 0) return ChebPoly({0.0});
  return ChebPoly(std::vector<double>(coeffs_.begin(), coeffs_.begin() + d + 1));
}

double ChebPoly::leading_coefficient() const {
  const int d = degree();
  if (d < 0) return 0.0;
  if (d == 0) return coeffs_[0];
  return std::ldexp(coeffs_[d], d - 1);
}

namespace {

// x * sum c_j T_j, using x T_0 = T_1 and x T_j = (T_{j+1} + T_{j-1}) / 2.
std::vector<double> times_x(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j == 0) {
      out[1] += c[0];
    } else {
      out[j + 1] += 0.5 * c[j];
      out[j - 1] += 0.5 * c[j];
    }
  }
  return out;
}

}  // namespace

ChebPoly ChebPoly::from_roots(std::span<const double> roots, double leading) {
  // Leja order: each factor maximizes the product of distances to those
  // already taken, which keeps the partial products well scaled on [-1, 1].
  std::vector<double> order(roots.begin(), roots.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t best = i;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = i; k < order.size(); ++k) {
      double score = i == 0 ? std::abs(order[k]) : 0.0;
      for (std::size_t j = 0; j < i; ++j) score += std::log(std::abs(order[k] - order[j]) + 1e-300);
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    std::swap(order[i], order[best]);
  }
  std::vector<double> c{leading};
  for (double r : order) {
    std::vector<double> next = times_x(c);
    for (std::size_t j = 0; j < c.size(); ++j) next[j] -= r * c[j];
    c = std::move(next);
  }
  return ChebPoly(std::move(c));
}

ChebPoly ChebPoly::monomial(int d) {
  if (d < 0) throw InvalidArgument("monomial: negative degree");
  std::vector<double> c{1.0};
  for (int i = 0; i < d; ++i) c = times_x(c);
  return ChebPoly(std::move(c));
}

double eval(const ChebPoly& p, double x) { return p(x); }

// ---------------------------------------------------------------------------

LogAbs eval_log_abs(const RootProduct& p, double x) {
  if (p.leading == 0.0) return {kLogZero, 0};
  double acc = std::log(std::abs(p.leading));
  int sign = p.leading > 0 ? 1 : -1;
  for (double r : p.roots) {
    const double diff = x - r;
    if (diff == 0.0) return {kLogZero, 0};
    acc += std::log(std::abs(diff));
    if (diff < 0) sign = -sign;
  }
  return {acc, sign};
}

LogAbs eval_log_abs(const ChebPoly& p, double x) {
  const double v = p(x);
  if (v == 0.0) return {kLogZero, 0};
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

// ---------------------------------------------------------------------------

namespace {

double local_sup(const ChebPoly& p, double z, double h) {
  double m = 0.0;
  constexpr int kSamples = 33;
  for (int i = 0; i < kSamples; ++i) {
    const double x = z - h + 2.0 * h * i / (kSamples - 1);
    m = std::max(m, std::abs(p(x)));
  }
  return m;
}

// Newton from an eigenvalue estimate.  Steps are rejected if they wander
// further than `max_move` from the start.
double polish(const ChebPoly& p, double x0, double max_move) {
  double x = x0;
  for (int it = 0; it < 12; ++it) {
    double v, s;
    p.eval_with_derivative(x, v, s);
    if (v == 0.0 || s == 0.0 || !std::isfinite(s)) break;
    const double step = v / s;
    const double next = x - step;
    if (!std::isfinite(next) || std::abs(next - x0) > max_move) break;
    x = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

struct RawEigen {
  std::vector<double> real_parts;
  int complex_count = 0;
};

RawEigen colleague_eigenvalues(const ChebPoly& q) {
  RawEigen out;
  const auto& c = q.coeffs();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return out;
  if (d == 1) {
    out.real_parts.push_back(-c[0] / c[1]);
    return out;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m(0, 1) = 1.0;
  for (int i = 1; i < d - 1; ++i) {
    m(i, i - 1) = 0.5;
    m(i, i + 1) = 0.5;
  }
  m(d - 1, d - 2) = 0.5;
  for (int j = 0; j < d; ++j) m(d - 1, j) -= c[j] / (2.0 * c[d]);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("colleague matrix eigenvalue iteration failed (degree " +
                         std::to_string(d) + ")");
  }
  const auto& ev = solver.eigenvalues();
  for (int i = 0; i < d; ++i) {
    const double re = ev[i].real();
    const double im = ev[i].imag();
    if (std::abs(im) <= 1e-7 * std::max(1.0, std::abs(re))) {
      out.real_parts.push_back(re);
    } else {
      ++out.complex_count;
    }
  }
  return out;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > 1e-13 * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  return out;
}

}  // namespace

ZeroSet roots_in_window(const ChebPoly& p, double lo, double hi, double local_halfwidth) {
  if (!(lo < hi)) throw InvalidArgument("roots_in_window: need lo < hi");
  ZeroSet out;
  const ChebPoly q = p.truncated();
  if (q.degree() <= 0) return out;

  const RawEigen raw = colleague_eigenvalues(q);
  const double margin = 1e-6 * (hi - lo);
  const double move = std::max(1e-3 * (hi - lo), local_halfwidth);
  std::vector<double> found;
  for (double re : raw.real_parts) {
    if (re < lo - margin || re > hi + margin) continue;
    const double z = polish(q, re, move);
    if (z >= lo && z <= hi) found.push_back(z);
  }
  out.zeros = sorted_unique(std::move(found));
  for (double z : out.zeros) {
    const double scale = std::max(1.0, local_sup(q, z, local_halfwidth));
    out.residual = std::max(out.residual, std::abs(q(z)) / scale);
  }
  return out;
}

RootSpectrum root_spectrum(const ChebPoly& p) {
  RootSpectrum out;
  const ChebPoly q = p.truncated();
  if (q.degree() <= 0) return out;
  const RawEigen raw = colleague_eigenvalues(q);
  out.complex_count = raw.complex_count;
  std::vector<double> found;
  for (double re : raw.real_parts) {
    found.push_back(polish(q, re, 1e-2 * std::max(1.0, std::abs(re))));
  }
  out.real_roots = sorted_unique(std::move(found));
  // Two eigenvalues polishing onto one root means a root was lost; report
  // the shortfall as non-real so callers do not silently pass.
  out.complex_count += static_cast<int>(raw.real_parts.size() - out.real_roots.size());
  return out;
}

// ---------------------------------------------------------------------------

IntervalNorm sup_norm_interval(const ChebPoly& p, double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("sup_norm_interval: need lo < hi");
  const ChebPoly q = p.truncated();
  const int d = q.degree();
  if (d <= 0) return {std::abs(q(lo)), lo};

  // Route 1: endpoints and critical points.
  IntervalNorm crit{std::abs(q(lo)), lo};
  auto consider = [&](IntervalNorm& best, double x) {
    const double v = std::abs(q(x));
    if (v > best.value) best = {v, x};
  };
  consider(crit, hi);
  if (d >= 2) {
    for (double z : roots_in_window(q.derivative(), lo, hi, (hi - lo) / (4.0 * d)).zeros) {
      consider(crit, z);
    }
  }

  // Route 2: dense Chebyshev-spaced sampling with local refinement.
  const int samples = std::max(64, 30 * (d + 1));
  std::vector<double> xs(samples);
  int best_i = 0;
  double best_v = -1.0;
  for (int i = 0; i < samples; ++i) {
    const double t = -std::cos(std::numbers::pi * i / (samples - 1));
    xs[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    const double v = std::abs(q(xs[i]));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = xs[std::max(0, best_i - 1)];
  const double b = xs[std::min(samples - 1, best_i + 1)];
  auto [xr, vr] = detail::golden_max([&](double x) { return std::abs(q(x)); }, a, b,
                                     1e-15 * std::max(1.0, std::abs(b - a)));
  IntervalNorm sampled = vr >= best_v ? IntervalNorm{vr, xr} : IntervalNorm{best_v, xs[best_i]};

  const double scale = std::max(crit.value, sampled.value);
  if (scale > 0 && std::abs(crit.value - sampled.value) > 1e-6 * scale) {
    throw NumericFailure("sup_norm_interval: critical-point and sampled maxima disagree (" +
                         std::to_string(crit.value) + " vs " + std::to_string(sampled.value) + ")");
  }
  return crit.value >= sampled.value ? crit : sampled;
}

GridNorm grid_norm(const ChebPoly& p, const Grid& g) {
  GridNorm out;
  for (int k = 0; k < g.n; ++k) {
    const double v = std::abs(p(g.points[k]));
    if (v > out.value) out = {v, k};
  }
  return out;
}

}  // namespace gridext
