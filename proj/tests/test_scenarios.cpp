#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "horizon/io.hpp"
#include "horizon/scenarios.hpp"

using namespace horizon;

TEST_CASE("registry lists eight scenarios") {
  auto names = scenario_names();
  CHECK(names.size() == 8);
  for (const auto& n : names) CHECK(scenario_exists(n));
  CHECK_FALSE(scenario_exists("nonexistent"));
  CHECK(scenario_expects_rejection("resource_case_b"));
  CHECK_FALSE(scenario_expects_rejection("lq_regulator"));
}

TEST_CASE("every scenario run reaches its expected verdict") {
  for (const auto& name : scenario_names()) {
    auto run = run_scenario(name);
    INFO("scenario ", name);
    CHECK(run.pass);
    CHECK(run.rejected == scenario_expects_rejection(name));
    if (!run.rejected) {
      REQUIRE(run.artifacts);
      CHECK(run.artifacts->grid.size() >= 8);
    }
  }
}

TEST_CASE("switching time of the growth model") {
  double tau = solve_switching_time(0.5, 3.0);
  CHECK(std::abs(tau - 2.0 * std::log(1.25)) < 1e-10);
  CHECK_THROWS_AS(solve_switching_time(0.5, 1.0), Error);
}

TEST_CASE("extraction classification covers both regimes") {
  auto fs = resource_log_f();
  auto a_case = resource_extraction_threshold(fs, 0.1, 0.05, 1.0, 0.6, 1.0);
  CHECK(a_case.label == "A");
  CHECK_FALSE(a_case.t_prime.has_value());

  auto c_case = resource_extraction_threshold(fs, 0.1, 0.05, 1.0, 0.1, 1.0);
  CHECK(c_case.label == "C");
  REQUIRE(c_case.t_prime.has_value());
  // the depletion time reproduces the initial stock
  double refill = resource_total_extraction(fs, 0.1, c_case.d, 0.1, *c_case.t_prime);
  CHECK(std::abs(refill - 1.0) < 1e-8);

  // total extraction grows with the horizon
  double prev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    double U = resource_total_extraction(fs, 0.1, c_case.d, 0.1, 0.25 * k);
    CHECK(U > prev);
    prev = U;
  }
}

TEST_CASE("verification round trip through the csv schema") {
  auto run = run_scenario("lq_regulator");
  REQUIRE(run.pass);
  REQUIRE(run.artifacts);
  auto csv = trajectory_csv(run.artifacts->candidate, run.artifacts->grid);
  auto data = parse_trajectory_csv(csv, 1, 1);
  CHECK(data.times.size() == run.artifacts->grid.size());
  CHECK(data.x_limit.size() == 1);

  auto reverified = verify_process("lq_regulator", data.times, data.x, data.u, data.x_limit);
  CHECK(reverified.pass);

  // the same table with the control inflated by 10 percent must fail
  auto scaled = data;
  for (auto& u : scaled.u) u *= 1.1;
  auto broken = verify_process("lq_regulator", scaled.times, scaled.x, scaled.u, scaled.x_limit);
  CHECK_FALSE(broken.pass);
  const auto* mc = broken.report.find("max-condition");
  REQUIRE(mc != nullptr);
  CHECK_FALSE(mc->pass);
}

TEST_CASE("imported tables are validated against the schema") {
  CHECK_THROWS_AS(parse_trajectory_csv("", 1, 1), Error);
  CHECK_THROWS_AS(parse_trajectory_csv("t,x_1\n0,1\n", 1, 1), Error);  // missing u_1
  CHECK_THROWS_AS(parse_trajectory_csv("t,x_1,u_1\n0,1,abc\n", 1, 1), Error);
  CHECK_THROWS_AS(parse_trajectory_csv("t,x_1,u_1\n1,1,0\n0,1,0\n", 1, 1), Error);
  try {
    parse_trajectory_csv("t,x_1,u_2\n", 1, 1);
    FAIL("schema mismatch expected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::schema_mismatch);
    CHECK(std::string(e.what()).find("u_1") != std::string::npos);
  }
}

TEST_CASE("rejection scenarios refuse imported candidates") {
  auto art = build_scenario("lq_regulator", 16);
  std::vector<double> times = art.grid.nodes();
  std::vector<Vec> x, u;
  for (double t : times) {
    x.push_back(art.candidate.state(t));
    u.push_back(art.candidate.control(t));
  }
  CHECK_THROWS_AS(verify_process("resource_case_b", times, x, u, Vec()), Error);
}

TEST_CASE("per-scenario config overrides merge on top of defaults") {
  const char* path = "test_scenarios_config.json";
  {
    std::ofstream out(path);
    out << R"({"lq_regulator": {"N": 32, "tol_abs": 1e-5}})";
  }
  auto opts = scenario_config("lq_regulator", path);
  CHECK(opts.N == 32);
  CHECK(opts.tol_abs == 1e-5);
  CHECK(opts.tol_rel == 1e-6);

  auto other = scenario_config("ramsey_budget", path);
  CHECK(other.N == 0);

  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(scenario_config("lq_regulator", path), Error);
  std::remove(path);
}

TEST_CASE("identical configuration gives byte-identical reports") {
  auto a = run_scenario("ramsey_fixed");
  auto b = run_scenario("ramsey_fixed");
  CHECK(report_json(a.report) == report_json(b.report));
}

TEST_CASE("residuals shrink when the grid is refined") {
  ScenarioRunOptions coarse;
  coarse.N = 64;
  ScenarioRunOptions fine;
  fine.N = 256;
  auto run_coarse = run_scenario("ramsey_budget", coarse);
  auto run_fine = run_scenario("ramsey_budget", fine);
  const auto* rc = run_coarse.report.find("adjoint-residual-nodes");
  const auto* rf = run_fine.report.find("adjoint-residual-nodes");
  REQUIRE(rc != nullptr);
  REQUIRE(rf != nullptr);
  CHECK(rf->residual < rc->residual);
}
