#include "gridext/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gridext/detail/golden.hpp"
#include "gridext/errors.hpp"

namespace gridext {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-13;

void require_alpha_open(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument(std::string(who) + ": alpha must lie in (0, 1)");
  }
}

double radius(double alpha) { return std::sqrt((1.0 - alpha) * (1.0 + alpha)); }

boost::math::quadrature::tanh_sinh<double>& ts() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator;
}

// Integrates f(y, d_lo, d_hi) over [lo, hi], where d_lo = y - lo and
// d_hi = hi - y are exact even next to the endpoints.
template <class F>
double integrate_ends(F f, double lo, double hi, const char* who) {
  if (!(hi > lo)) return 0.0;
  auto g = [&](double y, double yc) -> double {
    const double d_lo = yc < 0.0 ? -yc : y - lo;
    const double d_hi = yc > 0.0 ? yc : hi - y;
    return f(y, d_lo, d_hi);
  };
  double err = 0.0, l1 = 0.0;
  const double v = ts().integrate(g, lo, hi, kQuadTol, &err, &l1);
  if (!std::isfinite(v) || err > 1e-9 * std::max(1.0, l1)) {
    throw NumericFailure(std::string(who) + ": quadrature did not converge (error estimate " +
                         std::to_string(err) + ")");
  }
  return v;
}

// Antiderivatives of log|t| and t log|t|.
double G(double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; }
double H(double t) { return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.25 * t * t; }

double gauss_log(double x, double p, double q, const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss<double, 30>::integrate(
      [&](double y) { return std::log(std::abs(x - y)) * f(y); }, p, q);
}

// int_a^b log|x - y| dy times a constant density.
double uniform_log_integral(double x, double a, double b) {
  const double dist = std::max({a - x, x - b, 0.0});
  if (dist > 2.0 * (b - a)) return gauss_log(x, a, b, [](double) { return 1.0; });
  return G(b - x) - G(a - x);
}

// int over the piece of log|x - y| * density(y) dy.
double piece_log_integral(const DensityPiece& p, double x) {
  switch (p.kind) {
    case DensityKind::Uniform:
      return p.value * uniform_log_integral(x, p.a, p.b);
    case DensityKind::Table: {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < p.xs.size(); ++i) {
        const double lo = p.xs[i], hi = p.xs[i + 1];
        if (!(hi > lo)) continue;
        const double slope = (p.ys[i + 1] - p.ys[i]) / (hi - lo);
        const double dist = std::max({lo - x, x - hi, 0.0});
        if (dist > 2.0 * (hi - lo)) {
          sum += gauss_log(x, lo, hi, [&](double y) { return p.ys[i] + slope * (y - lo); });
        } else {
          const double A = p.ys[i] + slope * (x - lo);
          sum += A * (G(hi - x) - G(lo - x)) + slope * (H(hi - x) - H(lo - x));
        }
      }
      return sum;
    }
    case DensityKind::MuAlpha:
    case DensityKind::Custom:
      break;
  }
  const double a = p.a, b = p.b;
  if (x > a && x < b) {
    // Subtract the density value at the singular point.
    const double fx = p(x);
    auto left = [&](double y, double, double d_hi) {
      return d_hi == 0.0 ? 0.0 : (p(y) - fx) * std::log(d_hi);
    };
    auto right = [&](double y, double d_lo, double) {
      return d_lo == 0.0 ? 0.0 : (p(y) - fx) * std::log(d_lo);
    };
    return integrate_ends(left, a, x, "potential") + integrate_ends(right, x, b, "potential") +
           fx * (G(b - x) - G(a - x));
  }
  const double dist = x <= a ? a - x : x - b;
  if (dist > 2.0 * (b - a)) {
    // Far away the integrand is smooth apart from the density's own endpoint
    // behaviour, which tanh-sinh absorbs.
    return integrate_ends([&](double y, double, double) { return p(y) * std::log(std::abs(x - y)); },
                          a, b, "potential");
  }
  auto f = [&](double y, double d_lo, double d_hi) {
    const double d = x <= a ? dist + d_lo : dist + d_hi;
    return d == 0.0 ? 0.0 : p(y) * std::log(d);
  };
  return integrate_ends(f, a, b, "potential");
}

double piece_mass_until(const DensityPiece& p, double x) {
  const double hi = std::min(x, p.b);
  if (!(hi > p.a)) return 0.0;
  switch (p.kind) {
    case DensityKind::Uniform:
      return p.value * (hi - p.a);
    case DensityKind::Table: {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < p.xs.size() && p.xs[i] < hi; ++i) {
        const double lo = p.xs[i], up = std::min(p.xs[i + 1], hi);
        sum += 0.5 * (p.ys[i] + p(up)) * (up - lo);
      }
      return sum;
    }
    case DensityKind::MuAlpha:
    case DensityKind::Custom:
      break;
  }
  return integrate_ends([&](double y, double, double) { return p(y); }, p.a, hi, "cdf");
}

// Minimum of U^mu over a union of closed intervals: 401 samples each, then
// golden-section refinement around the three best samples.
double min_potential(const PiecewiseMeasure& m, const std::vector<std::pair<double, double>>& sets) {
  struct Sample {
    double x, u, lo, hi;
  };
  std::vector<Sample> samples;
  constexpr int kSamples = 401;
  for (const auto& [lo, hi] : sets) {
    std::vector<double> xs(kSamples), us(kSamples);
    for (int i = 0; i < kSamples; ++i) {
      xs[i] = hi > lo ? lo + (hi - lo) * i / (kSamples - 1.0) : lo;
      us[i] = potential(m, xs[i]);
    }
    for (int i = 0; i < kSamples; ++i) {
      samples.push_back({xs[i], us[i], xs[std::max(i - 1, 0)], xs[std::min(i + 1, kSamples - 1)]});
    }
  }
  if (samples.empty()) throw InvalidArgument("min_potential: empty set");
  std::partial_sort(samples.begin(), samples.begin() + std::min<std::size_t>(3, samples.size()),
                    samples.end(), [](const Sample& a, const Sample& b) { return a.u < b.u; });
  double best = samples.front().u;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, samples.size()); ++i) {
    const Sample& s = samples[i];
    if (!(s.hi > s.lo)) continue;
    const auto [x, v] = detail::golden_max([&](double t) { return -potential(m, t); }, s.lo, s.hi, 1e-9);
    best = std::min(best, -v);
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------

double C_closed(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("C_closed: alpha must lie in [0, 1)");
  return 0.5 * ((1.0 + alpha) * std::log1p(alpha) + (1.0 - alpha) * std::log1p(-alpha));
}

double C_taylor(double alpha, int terms) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("C_taylor: alpha must lie in [0, 1)");
  if (terms < 1) throw InvalidArgument("C_taylor: terms must be >= 1");
  const double a2 = alpha * alpha;
  double power = 1.0, sum = 0.0;
  for (int k = 1; k <= terms; ++k) {
    power *= a2;
    sum += power / (2.0 * k * (2.0 * k - 1.0));
  }
  return sum;
}

double C_integrand(double alpha, double x) {
  require_alpha_open(alpha, "C_integrand");
  const double r = radius(alpha);
  if (!(x >= r && x < 1.0)) throw InvalidArgument("C_integrand: x must lie in [r, 1)");
  const double s = std::sqrt(std::max((x - r) * (x + r), 0.0));
  return std::log(alpha + s) - 0.5 * std::log((1.0 - x) * (1.0 + x));
}

double C_integral(double alpha) {
  require_alpha_open(alpha, "C_integral");
  const double r = radius(alpha);
  const double t_max = std::sqrt(1.0 - r);
  // x = 1 - t^2; the log(1 - x^2) singularity becomes log(t^2 (2 - t^2)).
  auto f = [&](double t, double, double d_hi) {
    const double x = 1.0 - t * t;
    // x^2 - r^2 = (x - r)(x + r) with x - r = t_max^2 - t^2.
    const double x_minus_r = d_hi * (t_max + t);
    const double s = std::sqrt(std::max(x_minus_r * (x + r), 0.0));
    const double log_one_minus_x2 = 2.0 * std::log(t) + std::log(2.0 - t * t);
    return 2.0 * t * (std::log(alpha + s) - 0.5 * log_one_minus_x2);
  };
  return integrate_ends(
      [&](double t, double d_lo, double d_hi) { return t == 0.0 ? 0.0 : f(t, d_lo, d_hi); }, 0.0, t_max,
      "C_integral");
}

double dC_dalpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("dC_dalpha: alpha must lie in [0, 1)");
  return 0.5 * (std::log1p(alpha) - std::log1p(-alpha));
}

// ---------------------------------------------------------------------------

double DensityPiece::operator()(double x) const {
  switch (kind) {
    case DensityKind::Uniform:
      return value;
    case DensityKind::MuAlpha: {
      const double r = radius(alpha);
      const double s2 = (r - x) * (r + x);
      if (s2 <= 0.0) return 0.5;
      return std::atan(alpha / std::sqrt(s2)) / kPi;
    }
    case DensityKind::Table: {
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + t * (ys[i + 1] - ys[i]);
    }
    case DensityKind::Custom:
      return fn(x);
  }
  return 0.0;
}

DensityPiece DensityPiece::uniform(double a, double b, double value) {
  DensityPiece p;
  p.a = a;
  p.b = b;
  p.kind = DensityKind::Uniform;
  p.value = value;
  return p;
}

DensityPiece DensityPiece::mu_alpha_branch(double alpha) {
  require_alpha_open(alpha, "mu_alpha_branch");
  DensityPiece p;
  p.alpha = alpha;
  p.b = radius(alpha);
  p.a = -p.b;
  p.kind = DensityKind::MuAlpha;
  return p;
}

DensityPiece DensityPiece::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw InvalidArgument("table density: need at least two (x, density) samples of equal count");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("table density: x values must increase strictly");
  }
  DensityPiece p;
  p.a = xs.front();
  p.b = xs.back();
  p.kind = DensityKind::Table;
  p.xs = std::move(xs);
  p.ys = std::move(ys);
  return p;
}

DensityPiece DensityPiece::custom(double a, double b, std::function<double(double)> fn) {
  DensityPiece p;
  p.a = a;
  p.b = b;
  p.kind = DensityKind::Custom;
  p.fn = std::move(fn);
  return p;
}

PiecewiseMeasure::PiecewiseMeasure(std::vector<DensityPiece> pieces, std::string kind)
    : pieces_(std::move(pieces)), kind_(std::move(kind)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const auto& p, const auto& q) { return p.a < q.a; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.a < p.b) || p.a < -1.0 || p.b > 1.0) {
      throw InvalidArgument("PiecewiseMeasure: pieces must be nonempty subintervals of [-1, 1]");
    }
    if (i > 0 && p.a < pieces_[i - 1].b) throw InvalidArgument("PiecewiseMeasure: pieces overlap");
  }
  for (const auto& p : pieces_) mass_ += piece_mass_until(p, p.b);
}

double PiecewiseMeasure::density(double x) const {
  for (const auto& p : pieces_) {
    if (x >= p.a && x <= p.b) return p(x);
  }
  return 0.0;
}

std::vector<double> PiecewiseMeasure::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(p.a);
    out.push_back(p.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseMeasure sigma() { return PiecewiseMeasure({DensityPiece::uniform(-1.0, 1.0, 0.5)}, "uniform"); }

PiecewiseMeasure uniform_measure(double a, double b, double value) {
  return PiecewiseMeasure({DensityPiece::uniform(a, b, value)}, "uniform");
}

PiecewiseMeasure scaled_sigma(double alpha) {
  require_alpha_open(alpha, "scaled_sigma");
  return uniform_measure(-1.0, 1.0, 0.5 * alpha);
}

PiecewiseMeasure truncated_sigma(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("truncated_sigma: t must lie in (0, 1]");
  return PiecewiseMeasure({DensityPiece::uniform(-t, t, 0.5)}, "truncated_sigma");
}

PiecewiseMeasure mixture(const PiecewiseMeasure& m1, const PiecewiseMeasure& m2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mixture: lambda must lie in [0, 1]");
  std::vector<double> cuts = m1.breakpoints();
  const auto more = m2.breakpoints();
  cuts.insert(cuts.end(), more.begin(), more.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto a = std::make_shared<const PiecewiseMeasure>(m1);
  auto b = std::make_shared<const PiecewiseMeasure>(m2);
  auto piece_at = [](const PiecewiseMeasure& m, double mid) -> const DensityPiece* {
    for (const auto& p : m.pieces()) {
      if (mid > p.a && mid < p.b) return &p;
    }
    return nullptr;
  };
  std::vector<DensityPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1], mid = 0.5 * (lo + hi);
    const DensityPiece* p = piece_at(*a, mid);
    const DensityPiece* q = piece_at(*b, mid);
    if (!p && !q) continue;
    const bool p_flat = !p || p->kind == DensityKind::Uniform;
    const bool q_flat = !q || q->kind == DensityKind::Uniform;
    if (p_flat && q_flat) {
      pieces.push_back(DensityPiece::uniform(lo, hi, lambda * (p ? p->value : 0.0) +
                                                         (1.0 - lambda) * (q ? q->value : 0.0)));
    } else {
      pieces.push_back(DensityPiece::custom(lo, hi, [a, b, lambda](double y) {
        return lambda * a->density(y) + (1.0 - lambda) * b->density(y);
      }));
    }
  }
  return PiecewiseMeasure(std::move(pieces), "custom");
}

PiecewiseMeasure odd_perturbation(const PiecewiseMeasure& m, double eps, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw InvalidArgument("odd_perturbation: c must lie in (0, 1]");
  auto base = std::make_shared<const PiecewiseMeasure>(m);
  std::vector<double> cuts = m.breakpoints();
  cuts.push_back(-c);
  cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<DensityPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1], mid = 0.5 * (lo + hi);
    const bool covered = std::any_of(m.pieces().begin(), m.pieces().end(),
                                     [&](const DensityPiece& p) { return mid > p.a && mid < p.b; });
    const bool bumped = mid > -c && mid < c;
    if (!covered && !bumped) continue;
    if (!bumped) {
      pieces.push_back(DensityPiece::custom(lo, hi, [base](double y) { return base->density(y); }));
    } else {
      pieces.push_back(DensityPiece::custom(lo, hi, [base, eps, c](double y) {
        return base->density(y) + eps * y * (c * c - y * y);
      }));
    }
  }
  return PiecewiseMeasure(std::move(pieces), "custom");
}

double AlphaMeasure::density_arctan(double x) const {
  if (x <= -1.0 || x >= 1.0) return x == -1.0 || x == 1.0 ? 0.5 : 0.0;
  if (saturated(x)) return 0.5;
  return std::atan(alpha / std::sqrt((r - x) * (r + x))) / kPi;
}

double AlphaMeasure::density_arccos(double x) const {
  if (x <= -1.0 || x >= 1.0) return x == -1.0 || x == 1.0 ? 0.5 : 0.0;
  if (saturated(x)) return 0.5;
  const double arg = std::min(alpha / std::sqrt((1.0 - x) * (1.0 + x)), 1.0);
  return 0.5 - std::acos(arg) / kPi;
}

AlphaMeasure mu_alpha(double alpha) {
  require_alpha_open(alpha, "mu_alpha");
  AlphaMeasure out;
  out.alpha = alpha;
  out.r = radius(alpha);
  out.measure = PiecewiseMeasure({DensityPiece::uniform(-1.0, -out.r, 0.5), DensityPiece::mu_alpha_branch(alpha),
                                  DensityPiece::uniform(out.r, 1.0, 0.5)},
                                 "mu_alpha");
  if (std::abs(out.measure.total_mass() - alpha) > 1e-10) {
    throw NumericFailure("mu_alpha: mass " + std::to_string(out.measure.total_mass()) + " differs from alpha");
  }
  if (density_bound_violation(out.measure) > 0.0) throw NumericFailure("mu_alpha: density outside [0, 1/2]");
  return out;
}

double density_bound_violation(const PiecewiseMeasure& m, int samples_per_piece) {
  double worst = 0.0;
  for (const auto& p : m.pieces()) {
    for (int i = 0; i < samples_per_piece; ++i) {
      const double x = p.a + (p.b - p.a) * (i + 0.5) / samples_per_piece;
      const double v = p(x);
      worst = std::max({worst, -v, v - 0.5 - 1e-12});
    }
  }
  return worst;
}

double cdf(const PiecewiseMeasure& m, double x) {
  double sum = 0.0;
  for (const auto& p : m.pieces()) sum += piece_mass_until(p, x);
  return sum;
}

double potential(const PiecewiseMeasure& m, double x) {
  double sum = 0.0;
  for (const auto& p : m.pieces()) sum += piece_log_integral(p, x);
  return -sum;
}

double energy(const PiecewiseMeasure& m) {
  double sum = 0.0;
  for (const auto& p : m.pieces()) {
    sum += integrate_ends([&](double y, double, double) { return potential(m, y) * p(y); }, p.a, p.b, "energy");
  }
  return sum;
}

double potential_derivative_closed(double alpha, double x) {
  require_alpha_open(alpha, "potential_derivative_closed");
  const double r = radius(alpha);
  if (!(x > r && x < 1.0)) throw InvalidArgument("potential_derivative_closed: x must lie in (r, 1)");
  return 0.5 * std::log((1.0 - x) * (1.0 + x)) - std::log(alpha + std::sqrt((x - r) * (x + r)));
}

double I_alpha_closed(double alpha, double x) {
  require_alpha_open(alpha, "I_alpha_closed");
  const double r = radius(alpha);
  if (!(x > r)) throw InvalidArgument("I_alpha_closed: x must exceed r");
  const double s = std::sqrt((x - r) * (x + r));
  // (1 + x) / (alpha + s) - 1 = (1 - alpha + x - s) / (alpha + s), x - s = r^2 / (x + s).
  return std::log1p((1.0 - alpha + r * r / (x + s)) / (alpha + s));
}

double I_alpha_quadrature(double alpha, double x) {
  require_alpha_open(alpha, "I_alpha_quadrature");
  const double r = radius(alpha);
  if (!(x > r)) throw InvalidArgument("I_alpha_quadrature: x must exceed r");
  const double gap = x - r;
  auto f = [&](double y, double, double d_hi) {
    const double arg = std::min(alpha / std::sqrt((1.0 - y) * (1.0 + y)), 1.0);
    return std::acos(arg) / (gap + d_hi);
  };
  return integrate_ends(f, -r, r, "I_alpha_quadrature") / kPi;
}

EquilibriumData equilibrium_data(double alpha, int support_samples, int interval_samples) {
  require_alpha_open(alpha, "equilibrium_data");
  if (support_samples < 2 || interval_samples < 2) throw InvalidArgument("equilibrium_data: need >= 2 samples");
  const AlphaMeasure mu = mu_alpha(alpha);
  EquilibriumData d;
  d.alpha = alpha;
  d.r = mu.r;
  d.ell_alpha = potential(mu.measure, 0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < support_samples; ++i) {
    const double u = potential(mu.measure, -mu.r + 2.0 * mu.r * i / (support_samples - 1.0));
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  d.potential_on_support_spread = hi - lo;
  d.potential_at_r = potential(mu.measure, mu.r);
  d.potential_at_1 = potential(mu.measure, 1.0);
  d.C_check = d.potential_at_r - d.potential_at_1;
  d.max_over_interval = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < interval_samples; ++i) {
    d.max_over_interval = std::max(d.max_over_interval, potential(mu.measure, -1.0 + 2.0 * i / (interval_samples - 1.0)));
  }
  d.saturated_min_at_endpoints = true;
  for (int i = 0; i < 50; ++i) {
    const double x = mu.r + (1.0 - mu.r) * i / 50.0;
    if (potential(mu.measure, x) < d.potential_at_1 || potential(mu.measure, -x) < d.potential_at_1) {
      d.saturated_min_at_endpoints = false;
    }
  }
  return d;
}

std::vector<std::pair<double, double>> unsaturated_support(const PiecewiseMeasure& m, double threshold) {
  const double level = 0.5 - threshold;
  std::vector<std::pair<double, double>> runs;
  auto add = [&](double lo, double hi) {
    if (!runs.empty() && lo <= runs.back().second + 1e-14) {
      runs.back().second = std::max(runs.back().second, hi);
    } else {
      runs.emplace_back(lo, hi);
    }
  };
  // Everything off the pieces has density 0.
  double cursor = -1.0;
  for (const auto& p : m.pieces()) {
    if (p.a > cursor) add(cursor, p.a);
    cursor = p.b;
    switch (p.kind) {
      case DensityKind::Uniform:
        if (p.value < level) add(p.a, p.b);
        continue;
      case DensityKind::MuAlpha:
        add(p.a, p.b);
        continue;
      default:
        break;
    }
    constexpr int kSamples = 401;
    auto below = [&](double x) { return p(x) < level; };
    // Boundary of a run between an inside sample and an outside one.
    auto edge = [&](double in, double out) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (in + out);
        (below(mid) ? in : out) = mid;
      }
      return in;
    };
    double prev_x = p.a;
    bool prev_in = below(p.a);
    double start = p.a;
    for (int i = 1; i < kSamples; ++i) {
      const double x = p.a + (p.b - p.a) * i / (kSamples - 1.0);
      const bool in = below(x);
      if (in && !prev_in) start = edge(x, prev_x);
      if (!in && prev_in) add(start, edge(prev_x, x));
      prev_x = x;
      prev_in = in;
    }
    if (prev_in) add(start, p.b);
  }
  if (cursor < 1.0) add(cursor, 1.0);
  return runs;
}

double J_functional(const PiecewiseMeasure& m) {
  const auto supp = unsaturated_support(m);
  if (supp.empty()) throw InvalidArgument("J_functional: supp(sigma - mu) is empty");
  return min_potential(m, supp) - min_potential(m, {{-1.0, 1.0}});
}

std::vector<std::pair<std::string, PiecewiseMeasure>> j_test_family(double alpha) {
  require_alpha_open(alpha, "j_test_family");
  const AlphaMeasure mu = mu_alpha(alpha);
  const double r = mu.r;
  std::vector<std::pair<std::string, PiecewiseMeasure>> out;
  out.emplace_back("scaled_sigma", scaled_sigma(alpha));
  out.emplace_back("truncated_sigma", truncated_sigma(alpha));
  out.emplace_back("mixture_with_scaled_sigma", mixture(mu.measure, scaled_sigma(alpha), 0.5));
  // Odd and even mass-neutral bumps on (-r, r); both keep the density in
  // [0, 1/2] and leave the saturated region untouched.
  out.emplace_back("odd_bump", odd_perturbation(mu.measure, 0.6 * std::atan(alpha / r) / (kPi * r * r * r), r));
  {
    auto base = std::make_shared<const PiecewiseMeasure>(mu.measure);
    const double eps = 0.75 * std::atan(alpha / r) / (kPi * r * r);
    std::vector<DensityPiece> pieces = mu.measure.pieces();
    pieces[1] = DensityPiece::custom(-r, r, [base, eps, r](double y) {
      return base->density(y) + eps * (r * r / 3.0 - y * y);
    });
    out.emplace_back("even_bump", PiecewiseMeasure(std::move(pieces), "custom"));
  }
  return out;
}

}  // namespace gridext
