// grid_extremal: command-line front end for the gridext library.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or invalid input,
// 3 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gridext/asymptotics.hpp"
#include "gridext/equilibrium.hpp"
#include "gridext/errors.hpp"
#include "gridext/io.hpp"
#include "gridext/minmax.hpp"
#include "gridext/ratio_extremal.hpp"
#include "gridext/verify.hpp"

namespace {

using gridext::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct GlobalFlags {
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<int> workers;
  std::optional<int> scan_points;
};

gridext::RunConfig resolve_config(const GlobalFlags& flags) {
  gridext::RunConfig cfg;
  if (const char* env = std::getenv("GRID_EXTREMAL_WORKERS"); env && *env) {
    try {
      cfg.harness.workers = std::stoi(env);
    } catch (const std::exception&) {
      throw gridext::InvalidArgument("GRID_EXTREMAL_WORKERS must be an integer");
    }
  }
  if (flags.config) cfg = gridext::load_run_config(*flags.config, cfg);
  if (flags.format) cfg.format = *flags.format;
  if (flags.out) cfg.out = *flags.out;
  if (flags.workers) cfg.harness.workers = *flags.workers;
  if (flags.scan_points) cfg.harness.scan_points = *flags.scan_points;
  if (cfg.harness.workers < 1) throw gridext::InvalidArgument("workers must be >= 1");
  if (cfg.harness.scan_points < 2) throw gridext::InvalidArgument("scan points must be >= 2");
  return cfg;
}

void emit(const gridext::RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw gridext::InvalidArgument("cannot write " + cfg.out);
  file << text;
}

void emit_json(const gridext::RunConfig& cfg, const json& j) {
  if (cfg.format != "json") throw gridext::InvalidArgument("csv output is available for sweep only");
  emit(cfg, j.dump(2) + "\n");
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw gridext::InvalidArgument("bad entry \"" + item + "\" in --n-list");
    }
    if (used != item.size()) throw gridext::InvalidArgument("bad entry \"" + item + "\" in --n-list");
    out.push_back(n);
  }
  if (out.empty()) throw gridext::InvalidArgument("--n-list is empty");
  return out;
}

int degree_for(int n, const std::optional<double>& alpha, const std::optional<int>& degree) {
  if (degree) return *degree;
  if (!alpha) throw gridext::InvalidArgument("give --alpha or --degree");
  if (!(*alpha > 0.0 && *alpha < 1.0)) throw gridext::InvalidArgument("alpha must lie in (0, 1)");
  return gridext::degree_budget(n, *alpha);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal polynomials on the equispaced grid and the constrained equilibrium measure."};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--format", flags.format, "Output format: json (default) or csv (sweep only)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", flags.out, "Write output to this file instead of standard output");
  app.add_option("--config", flags.config, "JSON config file; explicit flags take precedence")->check(CLI::ExistingFile);
  app.add_option("--workers", flags.workers,
                 "Worker threads for sweeps (default 1, or GRID_EXTREMAL_WORKERS when set)");
  app.add_option("--scan-points", flags.scan_points, "Samples per grid gap in the x* search (default 8)");

  // constant
  auto* constant = app.add_subcommand("constant", "The growth constant C(alpha)");
  double c_alpha = 0.0;
  std::string c_route = "closed";
  int c_terms = 30;
  constant->add_option("--alpha", c_alpha, "alpha in [0, 1)")->required();
  constant->add_option("--route", c_route, "closed, taylor, integral or all")
      ->check(CLI::IsMember({"closed", "taylor", "integral", "all"}));
  constant->add_option("--terms", c_terms, "Taylor terms (default 30)");

  // measure
  auto* measure = app.add_subcommand("measure", "Density, cdf and potential of mu_alpha");
  double m_alpha = 0.0;
  int m_points = 9;
  measure->add_option("--alpha", m_alpha, "alpha in (0, 1)")->required();
  measure->add_option("--points", m_points, "Chebyshev-spaced sample count, >= 2 (default 9)");

  // extremal
  auto* extremal = app.add_subcommand("extremal", "Norm-ratio maximizer p_n*");
  int e_n = 0;
  std::optional<double> e_alpha;
  std::optional<int> e_degree;
  bool e_emit_poly = false, e_structure = false;
  extremal->add_option("--n", e_n, "Grid size")->required();
  extremal->add_option("--alpha", e_alpha, "Degree budget floor(alpha n)");
  extremal->add_option("--degree", e_degree, "Degree, overriding --alpha");
  extremal->add_flag("--emit-poly", e_emit_poly, "Include Chebyshev coefficients");
  extremal->add_flag("--structure", e_structure, "Include the zero-structure report");

  // chebyshev
  auto* chebyshev = app.add_subcommand("chebyshev", "Monic polynomial of least grid norm P_n*");
  int ch_n = 0;
  std::optional<double> ch_alpha;
  std::optional<int> ch_degree;
  chebyshev->add_option("--n", ch_n, "Grid size")->required();
  chebyshev->add_option("--alpha", ch_alpha, "Degree floor(alpha n)");
  chebyshev->add_option("--degree", ch_degree, "Degree, overriding --alpha");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Growth-rate sweep over n, or the d ~ c sqrt(n) regime");
  std::optional<double> s_alpha, s_cr;
  std::string s_n_list, s_route = "ratio";
  std::optional<std::string> s_plot;
  sweep->add_option("--alpha", s_alpha, "alpha in (0, 1)");
  sweep->add_option("--n-list", s_n_list, "Comma-separated grid sizes")->required();
  sweep->add_option("--route", s_route, "ratio, monic or both")->check(CLI::IsMember({"ratio", "monic", "both"}));
  sweep->add_option("--cr", s_cr, "Use d = round(c sqrt(n)) instead of alpha");
  sweep->add_option("--plot-data", s_plot, "Also write (1/n, value, target) CSV to this file");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the built-in checks and print a pass/fail summary");
  std::string v_suite = "all";
  verify->add_option("--suite", v_suite, "identities, structure, convergence or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const gridext::RunConfig cfg = resolve_config(flags);

    if (*constant) {
      json j{{"alpha", c_alpha}, {"route", c_route}};
      if (c_route == "all") {
        const double closed = gridext::C_closed(c_alpha);
        const double taylor = gridext::C_taylor(c_alpha, c_terms);
        const double integral = gridext::C_integral(c_alpha);
        j["closed"] = closed;
        j["taylor"] = taylor;
        j["taylor_terms"] = c_terms;
        j["integral"] = integral;
        j["closed_minus_taylor"] = closed - taylor;
        j["closed_minus_integral"] = closed - integral;
      } else if (c_route == "taylor") {
        gridext::C_closed(c_alpha);  // range check
        j["value"] = gridext::C_taylor(c_alpha, c_terms);
        j["taylor_terms"] = c_terms;
      } else if (c_route == "integral") {
        j["value"] = gridext::C_integral(c_alpha);
      } else {
        j["value"] = gridext::C_closed(c_alpha);
      }
      emit_json(cfg, j);
    } else if (*measure) {
      if (m_points < 2) throw gridext::InvalidArgument("--points must be >= 2");
      const gridext::AlphaMeasure mu = gridext::mu_alpha(m_alpha);
      std::vector<double> xs{-mu.r, mu.r};
      for (int k = 0; k < m_points; ++k) {
        double x = -std::cos(3.14159265358979323846 * k / (m_points - 1));
        if (2 * k + 1 == m_points) x = 0.0;
        xs.push_back(x);
      }
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      json rows = json::array();
      for (double x : xs) {
        rows.push_back(json{{"x", x},
                            {"density", mu.measure.density(x)},
                            {"cdf", gridext::cdf(mu.measure, x)},
                            {"potential", gridext::potential(mu.measure, x)}});
      }
      emit_json(cfg, json{{"alpha", m_alpha}, {"r", mu.r}, {"C", gridext::C_closed(m_alpha)}, {"rows", rows}});
    } else if (*extremal) {
      gridext::RatioOptions opts = cfg.harness.ratio_options();
      opts.workers = 1;
      const int d = degree_for(e_n, e_alpha, e_degree);
      const gridext::ExtremalSolution sol = gridext::solve_ratio_extremal_degree(e_n, d, opts);
      json j = gridext::extremal_json(sol, e_emit_poly);
      if (e_alpha && !e_degree) j["alpha"] = *e_alpha;
      if (e_structure) j["structure"] = gridext::analyze_structure(sol);
      emit_json(cfg, j);
    } else if (*chebyshev) {
      const int d = degree_for(ch_n, ch_alpha, ch_degree);
      const gridext::MinMaxSolution sol = gridext::solve_monic_min(gridext::make_grid(ch_n), d);
      json j = sol;
      j["n"] = ch_n;
      j["d"] = d;
      j["active_set_size"] = sol.active_set.size();
      emit_json(cfg, j);
    } else if (*sweep) {
      const std::vector<int> ns = parse_n_list(s_n_list);
      const gridext::RatioOptions opts = cfg.harness.ratio_options();
      if (s_cr) {
        const gridext::CRReport rep = gridext::cr_regime(*s_cr, ns, opts);
        emit(cfg, cfg.format == "csv" ? gridext::cr_csv(rep) : json(rep).dump(2) + "\n");
      } else {
        if (!s_alpha) throw gridext::InvalidArgument("sweep needs --alpha or --cr");
        const gridext::SweepReport rep =
            s_route == "ratio"   ? gridext::sweep_ratio(*s_alpha, ns, opts)
            : s_route == "monic" ? gridext::sweep_monic(*s_alpha, ns, opts.workers)
                                 : gridext::sweep_both(*s_alpha, ns, opts);
        emit(cfg, cfg.format == "csv" ? gridext::sweep_csv(rep) : json(rep).dump(2) + "\n");
        if (s_plot) {
          std::ofstream plot(*s_plot);
          if (!plot) throw gridext::InvalidArgument("cannot write " + *s_plot);
          plot << gridext::plot_data_csv(rep);
        }
      }
    } else if (*verify) {
      gridext::HarnessConfig harness = cfg.harness;
      harness.workers = 1;
      const auto results = gridext::run_suite(v_suite, harness);
      std::ostringstream text;
      int passed = 0;
      for (const auto& r : results) {
        text << gridext::format_check(r) << "\n";
        passed += r.passed ? 1 : 0;
      }
      text << passed << " of " << results.size() << " checks passed\n";
      emit(cfg, text.str());
      return passed == static_cast<int>(results.size()) ? kExitOk : kExitVerifyFailed;
    }
  } catch (const gridext::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gridext::DegenerateProblem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gridext::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
