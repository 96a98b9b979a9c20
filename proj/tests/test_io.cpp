#include "doctest.h"

#include <cmath>
#include <cstring>
#include <sstream>

#include "gridext/errors.hpp"
#include "gridext/io.hpp"

using namespace gridext;

TEST_SUITE("io") {

TEST_CASE("ChebPoly round trip is bit exact") {
  const ChebPoly p(std::vector<double>{0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, std::nextafter(1.0, 2.0)});
  const json j = p;
  CHECK(j.at("basis") == "chebyshev");
  const ChebPoly q = json::parse(j.dump()).get<ChebPoly>();
  REQUIRE(q.coeffs().size() == p.coeffs().size());
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    CHECK(std::memcmp(&p.coeffs()[i], &q.coeffs()[i], sizeof(double)) == 0);
  }
}

TEST_CASE("ChebPoly input validation") {
  CHECK_THROWS_AS(json::parse(R"({"basis":"chebyshev","coeffs":[1],"extra":1})").get<ChebPoly>(), InvalidArgument);
  CHECK_THROWS(json::parse(R"({"basis":"monomial","coeffs":[1]})").get<ChebPoly>());
}

TEST_CASE("measure round trips") {
  for (const PiecewiseMeasure& m : {sigma(), scaled_sigma(0.4), truncated_sigma(0.3), mu_alpha(0.6).measure}) {
    const json j = m;
    const PiecewiseMeasure back = json::parse(j.dump()).get<PiecewiseMeasure>();
    CHECK(back.total_mass() == doctest::Approx(m.total_mass()).epsilon(1e-14));
    for (double x : {-0.95, -0.5, 0.0, 0.31, 0.79, 0.99}) CHECK(back.density(x) == m.density(x));
    CHECK(json(back).dump() == j.dump());
  }
}

TEST_CASE("truncated_sigma is accepted as an input piece and unknown keys are rejected") {
  const PiecewiseMeasure m = json::parse(R"({"pieces":[{"kind":"truncated_sigma","t":0.5}]})").get<PiecewiseMeasure>();
  CHECK(m.total_mass() == doctest::Approx(0.5));
  CHECK(m.density(0.2) == doctest::Approx(0.5));
  CHECK(m.density(0.7) == 0.0);
  CHECK_THROWS_AS(json::parse(R"({"pieces":[{"kind":"uniform","a":-1,"b":1,"value":0.5,"oops":1}]})")
                      .get<PiecewiseMeasure>(),
                  InvalidArgument);
}

TEST_CASE("the shipped harness config carries the pinned tolerances") {
  const RunConfig c = load_run_config(GRIDEXT_CONFIG_PATH);
  CHECK(c.harness.ratio_extrapolation_rel_tol == 0.05);
  CHECK(c.harness.monic_extrapolation_rel_tol == 0.07);
  CHECK(c.harness.saturated_mass_tol == 0.02);
  CHECK(c.harness.ordering_slack == 1e-12);
  CHECK(c.harness.j_margin == 1e-4);
  CHECK(c.harness.support_threshold == 1e-9);
  CHECK(c.harness.scan_points == 8);
  CHECK(c.harness.refine_width == 1e-10);
  CHECK(c.harness.refine_gaps == 4);
  CHECK(c.harness.workers == 1);
}

TEST_CASE("run config overlays and validation") {
  RunConfig base;
  base.harness.workers = 3;
  const RunConfig c = run_config_from_json(json::parse(R"({"format":"csv","tolerances":{"j_margin":0.01}})"), base);
  CHECK(c.format == "csv");
  CHECK(c.harness.workers == 3);
  CHECK(c.harness.j_margin == 0.01);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"bogus":1})")), InvalidArgument);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"workers":0})")), InvalidArgument);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"format":"xml"})")), InvalidArgument);
  CHECK_THROWS_AS(load_run_config("/nonexistent/harness.json"), InvalidArgument);
  const RunConfig again = run_config_from_json(to_json(c));
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("sweep CSV header, missing fields and full precision") {
  SweepReport r;
  r.alpha = 0.5;
  r.route = "ratio";
  SweepRow row;
  row.n = 10;
  row.d = 5;
  row.ratio = 1.0 / 3.0;
  row.log_ratio_over_n = 0.1;
  r.rows.push_back(row);
  const std::string csv = sweep_csv(r);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "n,d,ratio,log_ratio_over_n,monic_route_value,ks_distance");
  CHECK(line == "10,5,0.33333333333333331,0.10000000000000001,,");
  CHECK(plot_data_csv(r).rfind("inv_n,log_ratio_over_n,monic_route_value,target", 0) == 0);
  CRReport cr;
  CHECK(cr_csv(cr).rfind("n,d,ratio,exponent_estimate", 0) == 0);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("extremal JSON fields and deterministic output") {
  const ExtremalSolution s = solve_ratio_extremal(3, 2.0 / 3.0);
  const json a = extremal_json(s, true);
  for (const char* key : {"n", "alpha", "degree_budget", "x_star", "ratio", "log_ratio_over_n", "phi_at_x_star",
                          "certificate_gap", "lp_solves", "zeros", "outside_zero", "poly"}) {
    CHECK(a.contains(key));
  }
  CHECK_FALSE(extremal_json(s, false).contains("poly"));
  CHECK(a.dump() == extremal_json(solve_ratio_extremal(3, 2.0 / 3.0), true).dump());
}

}  // TEST_SUITE
