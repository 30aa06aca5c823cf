#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "plw/experiment.hpp"

using namespace plw;

TEST_CASE("log-log slope") {
  std::vector<double> x;
  std::vector<double> y;
  for (double s : {0.5, 0.25, 0.125, 0.0625}) {
    x.push_back(s);
    y.push_back(3.0 * std::pow(s, 1.5));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(1.5));
  y[1] = 0.0;  // dropped
  CHECK(loglog_slope(x, y) == doctest::Approx(1.5));
  CHECK(std::isnan(loglog_slope({0.5}, {1.0})));
  CHECK(std::isnan(loglog_slope({0.5, 0.5}, {1.0, 2.0})));
}

TEST_CASE("verification with constant data") {
  ExperimentConfig c;
  c.domain = "square_with_corner";
  c.geometry.h = 1.0 / 16;
  c.g = "0.5";
  c.scales = 2;
  c.R_o = 0.5;
  c.solver.T = 0.1;
  c.solver.dt = 0.05;
  const ExperimentReport r = run_verification(c);
  CHECK(r.omega_o == 0.0);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) CHECK(row.measured == 0.0);
  CHECK(r.bound_holds);
  CHECK(r.pass);
  CHECK(r.rows[0].rho == doctest::Approx(0.25));
  CHECK(r.rows[1].rho == doctest::Approx(0.125));

  std::ostringstream csv;
  write_report_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "rho,delta,A,bound,measured,t_lo,t_hi,nodes,r_exceeds_R_o,ok");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 2);

  std::ostringstream js;
  write_report_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["domain"] == "square_with_corner");
  CHECK(j["pass"] == true);
  CHECK(j.contains("classification"));
}

TEST_CASE("verification configuration errors") {
  ExperimentConfig c;
  c.geometry.h = 1.0 / 16;
  c.R_o = 1.0;
  CHECK_THROWS_AS(run_verification(c), InvalidArgument);
  c.R_o = 0.5;
  c.scales = 1;
  CHECK_THROWS_AS(run_verification(c), InvalidArgument);
  c.scales = 2;
  c.gamma2_grid = {0.5};
  CHECK_THROWS_AS(run_verification(c), InvalidArgument);
  c.gamma2_grid = {2.0};
  c.domain = "no_such_domain";
  CHECK_THROWS_AS(run_verification(c), InvalidArgument);
}

TEST_CASE("property suite") {
  SuiteOptions o;
  o.seed = 1;
  const PropertyLedger a = run_property_suite(o);
  CHECK(a.all_pass());
  CHECK(a.failures() == 0);
  CHECK(a.entries.size() == 11);

  std::ostringstream first;
  std::ostringstream second;
  write_ledger(first, a);
  write_ledger(second, run_property_suite(o));
  CHECK(first.str() == second.str());
  CHECK(first.str().find("all 11/11 checks passed") != std::string::npos);

  o.tamper_recursion = true;
  const PropertyLedger t = run_property_suite(o);
  CHECK_FALSE(t.all_pass());
  bool found = false;
  for (const auto& e : t.entries)
    if (e.name == "recursion_invariants_tampered") {
      found = true;
      CHECK_FALSE(e.pass);
    }
  CHECK(found);
}
