#pragma once

#include <string>

#include "json.hpp"

#include "gridext/asymptotics.hpp"
#include "gridext/equilibrium.hpp"
#include "gridext/grid_poly.hpp"
#include "gridext/minmax.hpp"
#include "gridext/ratio_extremal.hpp"

namespace gridext {

using json = nlohmann::json;

// ChebPoly: {"basis": "chebyshev", "coeffs": [...]}.  Doubles are written in
// shortest round-trip form, so reading back gives the same bits.
void to_json(json& j, const ChebPoly& p);
void from_json(const json& j, ChebPoly& p);

void to_json(json& j, const MinMaxSolution& s);
void to_json(json& j, const StructureReport& s);
void to_json(json& j, const EquilibriumData& e);
void to_json(json& j, const LinearFit& f);
void to_json(json& j, const SweepReport& r);
void to_json(json& j, const CRReport& r);
void to_json(json& j, const MonicRoute& m);

/// ExtremalSolution; the coefficient list is included only on request.
json extremal_json(const ExtremalSolution& s, bool emit_poly);

/// Piece list with named density kinds: "uniform", "mu_alpha", "table" on
/// output; "truncated_sigma" is also accepted on input.  Custom pieces are
/// written as tables sampled at 257 points.
void to_json(json& j, const PiecewiseMeasure& m);
void from_json(const json& j, PiecewiseMeasure& m);

/// CSV with columns n,d,ratio,log_ratio_over_n,monic_route_value,ks_distance;
/// missing values are empty fields.
std::string sweep_csv(const SweepReport& r);
/// Columns inv_n,log_ratio_over_n,monic_route_value,target.
std::string plot_data_csv(const SweepReport& r);
/// Columns n,d,ratio,exponent_estimate.
std::string cr_csv(const CRReport& r);

/// 17 significant digits.
std::string format_number(double x);

/// Settings shared by the CLI and the acceptance suite.
struct RunConfig {
  std::string format = "json";
  std::string out;  ///< empty means standard output
  HarnessConfig harness;
};

/// Overlays a JSON config on `base`.  Accepted keys: format, out, workers,
/// scan_points, refine_width, refine_gaps and a "tolerances" object holding
/// ratio_extrapolation_rel_tol, monic_extrapolation_rel_tol,
/// saturated_mass_tol, ordering_slack, j_margin, support_threshold.
/// Unknown keys or ill-typed values throw InvalidArgument.
RunConfig run_config_from_json(const json& j, RunConfig base = {});
json to_json(const RunConfig& c);

/// Reads and parses a config file; InvalidArgument on I/O or parse errors.
RunConfig load_run_config(const std::string& path, RunConfig base = {});

}  // namespace gridext
