#include "gridext/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gridext/errors.hpp"

namespace gridext {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw InvalidArgument(std::string(where) + ": unknown key \"" + item.key() + "\"");
    }
  }
}

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidArgument(std::string("expected a number for \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

int integer_at(const json& j, const char* key) {
  if (!j.at(key).is_number_integer()) throw InvalidArgument(std::string("expected an integer for \"") + key + "\"");
  return j.at(key).get<int>();
}

std::string string_at(const json& j, const char* key) {
  if (!j.at(key).is_string()) throw InvalidArgument(std::string("expected a string for \"") + key + "\"");
  return j.at(key).get<std::string>();
}

std::vector<double> numbers_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidArgument(std::string("expected an array for \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InvalidArgument(std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void to_json(json& j, const ChebPoly& p) { j = json{{"basis", "chebyshev"}, {"coeffs", p.coeffs()}}; }

void from_json(const json& j, ChebPoly& p) {
  reject_unknown(j, {"basis", "coeffs"}, "chebyshev polynomial");
  if (!j.contains("basis") || j.at("basis") != "chebyshev") {
    throw InvalidArgument("chebyshev polynomial: basis must be \"chebyshev\"");
  }
  p = ChebPoly(numbers_at(j, "coeffs"));
}

void to_json(json& j, const MinMaxSolution& s) {
  j = json{{"objective", s.objective},
           {"active_set", s.active_set},
           {"signs", s.signs},
           {"coeffs", s.poly},
           {"basis_nodes", s.basis_nodes},
           {"iterations", s.iterations},
           {"certificate_gap", s.certificate_gap}};
}

void to_json(json& j, const StructureReport& s) {
  j = json{{"all_real_simple", s.all_real_simple},
           {"count_in_open_interval", s.count_in_open_interval},
           {"separation_ok", s.separation_ok},
           {"max_zeros_per_gap", s.max_zeros_per_gap},
           {"gap_counts", s.gap_counts},
           {"outside_zeros", s.outside_zeros},
           {"complex_zeros", s.complex_zeros},
           {"degree_deficit", s.degree_deficit},
           {"min_derivative_ratio", s.min_derivative_ratio}};
}

json extremal_json(const ExtremalSolution& s, bool emit_poly) {
  json j{{"n", s.n},
         {"alpha", s.alpha},
         {"degree_budget", s.degree_budget},
         {"x_star", s.x_star},
         {"ratio", s.ratio},
         {"log_ratio_over_n", s.log_ratio_over_n},
         {"phi_at_x_star", s.phi_at_x_star},
         {"certificate_gap", s.certificate_gap},
         {"lp_solves", s.lp_solves},
         {"zeros", {{"values", s.zeros.zeros}, {"residual", s.zeros.residual}}},
         {"outside_zero", optional_number(s.outside_zero)}};
  if (emit_poly) j["poly"] = s.poly;
  return j;
}

void to_json(json& j, const EquilibriumData& e) {
  j = json{{"alpha", e.alpha},
           {"r", e.r},
           {"ell_alpha", e.ell_alpha},
           {"potential_on_support_spread", e.potential_on_support_spread},
           {"potential_at_r", e.potential_at_r},
           {"potential_at_1", e.potential_at_1},
           {"C_check", e.C_check},
           {"max_over_interval", e.max_over_interval},
           {"saturated_min_at_endpoints", e.saturated_min_at_endpoints}};
}

void to_json(json& j, const LinearFit& f) {
  j = json{{"a", f.a}, {"b", f.b}, {"residual", f.residual}, {"points", f.points}};
}

void to_json(json& j, const SweepReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"n", row.n},
                        {"d", row.d},
                        {"ratio", optional_number(row.ratio)},
                        {"log_ratio_over_n", optional_number(row.log_ratio_over_n)},
                        {"monic_route_value", optional_number(row.monic_route_value)},
                        {"ks_distance", optional_number(row.ks_distance)},
                        {"structure_ok", row.structure_ok}});
  }
  j = json{{"alpha", r.alpha},
           {"route", r.route},
           {"target", r.target},
           {"rows", rows},
           {"ratio_fit", r.ratio_fit ? json(*r.ratio_fit) : json(nullptr)},
           {"monic_fit", r.monic_fit ? json(*r.monic_fit) : json(nullptr)},
           {"extrapolated", optional_number(r.extrapolated)},
           {"rel_error", optional_number(r.rel_error)},
           {"monic_extrapolated", optional_number(r.monic_extrapolated)},
           {"monic_rel_error", optional_number(r.monic_rel_error)}};
}

void to_json(json& j, const CRReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"n", row.n}, {"d", row.d}, {"ratio", row.ratio}, {"exponent_estimate", row.exponent_estimate}});
  }
  j = json{{"c", r.c}, {"rows", rows}, {"band_min", r.band_min}, {"band_max", r.band_max}};
}

void to_json(json& j, const MonicRoute& m) {
  j = json{{"n", m.n},
           {"d", m.d},
           {"grid_norm", m.grid_norm},
           {"log_grid_norm", m.log_grid_norm},
           {"log_sup", m.log_sup},
           {"argmax", m.argmax},
           {"value", m.value},
           {"zeros", m.zeros},
           {"max_zeros_per_gap", m.max_zeros_per_gap},
           {"zeros_inside", m.zeros_inside},
           {"certificate_gap", m.certificate_gap}};
}

void to_json(json& j, const PiecewiseMeasure& m) {
  json pieces = json::array();
  for (const auto& p : m.pieces()) {
    switch (p.kind) {
      case DensityKind::Uniform:
        pieces.push_back(json{{"kind", "uniform"}, {"a", p.a}, {"b", p.b}, {"value", p.value}});
        break;
      case DensityKind::MuAlpha:
        pieces.push_back(json{{"kind", "mu_alpha"}, {"alpha", p.alpha}});
        break;
      case DensityKind::Table:
        pieces.push_back(json{{"kind", "table"}, {"x", p.xs}, {"density", p.ys}});
        break;
      case DensityKind::Custom: {
        constexpr int kSamples = 257;
        std::vector<double> xs(kSamples), ys(kSamples);
        for (int i = 0; i < kSamples; ++i) {
          xs[i] = i + 1 == kSamples ? p.b : p.a + (p.b - p.a) * i / (kSamples - 1);
          ys[i] = p(xs[i]);
        }
        pieces.push_back(json{{"kind", "table"}, {"x", xs}, {"density", ys}});
        break;
      }
    }
  }
  j = json{{"kind", m.kind()}, {"total_mass", m.total_mass()}, {"pieces", pieces}};
}

void from_json(const json& j, PiecewiseMeasure& m) {
  reject_unknown(j, {"kind", "total_mass", "pieces"}, "measure");
  if (!j.contains("pieces") || !j.at("pieces").is_array()) throw InvalidArgument("measure: missing \"pieces\" array");
  std::vector<DensityPiece> pieces;
  for (const auto& p : j.at("pieces")) {
    if (!p.is_object() || !p.contains("kind")) throw InvalidArgument("measure: every piece needs a \"kind\"");
    const std::string kind = string_at(p, "kind");
    if (kind == "uniform") {
      reject_unknown(p, {"kind", "a", "b", "value"}, "uniform piece");
      pieces.push_back(DensityPiece::uniform(number_at(p, "a"), number_at(p, "b"), number_at(p, "value")));
    } else if (kind == "mu_alpha") {
      reject_unknown(p, {"kind", "alpha"}, "mu_alpha piece");
      pieces.push_back(DensityPiece::mu_alpha_branch(number_at(p, "alpha")));
    } else if (kind == "truncated_sigma") {
      reject_unknown(p, {"kind", "t"}, "truncated_sigma piece");
      const double t = number_at(p, "t");
      pieces.push_back(DensityPiece::uniform(-t, t, 0.5));
    } else if (kind == "table") {
      reject_unknown(p, {"kind", "x", "density"}, "table piece");
      pieces.push_back(DensityPiece::table(numbers_at(p, "x"), numbers_at(p, "density")));
    } else {
      throw InvalidArgument("measure: unknown piece kind \"" + kind + "\"");
    }
  }
  m = PiecewiseMeasure(std::move(pieces), j.contains("kind") ? string_at(j, "kind") : std::string("custom"));
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "n,d,ratio,log_ratio_over_n,monic_route_value,ks_distance\n";
  for (const auto& row : r.rows) {
    out << row.n << ',' << row.d << ',' << csv_field(row.ratio) << ',' << csv_field(row.log_ratio_over_n) << ','
        << csv_field(row.monic_route_value) << ',' << csv_field(row.ks_distance) << '\n';
  }
  return out.str();
}

std::string plot_data_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "inv_n,log_ratio_over_n,monic_route_value,target\n";
  for (const auto& row : r.rows) {
    out << format_number(1.0 / row.n) << ',' << csv_field(row.log_ratio_over_n) << ','
        << csv_field(row.monic_route_value) << ',' << format_number(r.target) << '\n';
  }
  return out.str();
}

std::string cr_csv(const CRReport& r) {
  std::ostringstream out;
  out << "n,d,ratio,exponent_estimate\n";
  for (const auto& row : r.rows) {
    out << row.n << ',' << row.d << ',' << format_number(row.ratio) << ',' << format_number(row.exponent_estimate)
        << '\n';
  }
  return out.str();
}

RunConfig run_config_from_json(const json& j, RunConfig base) {
  reject_unknown(j, {"format", "out", "workers", "scan_points", "refine_width", "refine_gaps", "tolerances"}, "config");
  RunConfig c = std::move(base);
  HarnessConfig& h = c.harness;
  if (j.contains("format")) {
    c.format = string_at(j, "format");
    if (c.format != "json" && c.format != "csv") throw InvalidArgument("config: format must be json or csv");
  }
  if (j.contains("out")) c.out = string_at(j, "out");
  if (j.contains("workers")) h.workers = integer_at(j, "workers");
  if (j.contains("scan_points")) h.scan_points = integer_at(j, "scan_points");
  if (j.contains("refine_width")) h.refine_width = number_at(j, "refine_width");
  if (j.contains("refine_gaps")) h.refine_gaps = integer_at(j, "refine_gaps");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t,
                   {"ratio_extrapolation_rel_tol", "monic_extrapolation_rel_tol", "saturated_mass_tol", "ordering_slack",
                    "j_margin", "support_threshold"},
                   "config tolerances");
    auto set = [&](const char* key, double& field) {
      if (t.contains(key)) field = number_at(t, key);
    };
    set("ratio_extrapolation_rel_tol", h.ratio_extrapolation_rel_tol);
    set("monic_extrapolation_rel_tol", h.monic_extrapolation_rel_tol);
    set("saturated_mass_tol", h.saturated_mass_tol);
    set("ordering_slack", h.ordering_slack);
    set("j_margin", h.j_margin);
    set("support_threshold", h.support_threshold);
  }
  if (h.workers < 1) throw InvalidArgument("config: workers must be >= 1");
  if (h.scan_points < 2) throw InvalidArgument("config: scan_points must be >= 2");
  if (h.refine_gaps < 1) throw InvalidArgument("config: refine_gaps must be >= 1");
  if (!(h.refine_width > 0.0)) throw InvalidArgument("config: refine_width must be positive");
  return c;
}

json to_json(const RunConfig& c) {
  const HarnessConfig& h = c.harness;
  return json{{"format", c.format},
              {"out", c.out},
              {"workers", h.workers},
              {"scan_points", h.scan_points},
              {"refine_width", h.refine_width},
              {"refine_gaps", h.refine_gaps},
              {"tolerances",
               {{"ratio_extrapolation_rel_tol", h.ratio_extrapolation_rel_tol},
                {"monic_extrapolation_rel_tol", h.monic_extrapolation_rel_tol},
                {"saturated_mass_tol", h.saturated_mass_tol},
                {"ordering_slack", h.ordering_slack},
                {"j_margin", h.j_margin},
                {"support_threshold", h.support_threshold}}}};
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config file " + path + ": " + e.what());
  }
  return run_config_from_json(j, std::move(base));
}

}  // namespace gridext
