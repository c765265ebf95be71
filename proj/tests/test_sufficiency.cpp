#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horizon/ode.hpp"
#include "horizon/scenarios.hpp"
#include "horizon/sufficiency.hpp"

using namespace horizon;

TEST_CASE("arrow bundle passes on the regulator") {
  auto art = build_scenario("lq_regulator", 128);
  ArrowOptions opts;
  opts.max_gap_tol = 1e-8;
  auto verdict = arrow_verdict(art.problem, art.candidate, art.adjoint, art.grid, opts);
  CHECK(verdict.pass);
  CHECK(verdict.piecewise_adjoint_valid);
  CHECK(verdict.probe.violations == 0);
  CHECK(verdict.probe.convexity_violations == 0);
}

TEST_CASE("concavity probe rejects a convex sup-hamiltonian") {
  auto art = build_scenario("lq_regulator", 64);
  // flip the cost sign: sup-H becomes convex in x
  ControlProblem flipped = art.problem;
  flipped.f = [base = art.problem.f](double t, const Vec& x, const Vec& u) {
    return -base(t, x, u);
  };
  flipped.f_x = [base = art.problem.f_x](double t, const Vec& x, const Vec& u) {
    return Vec(-base(t, x, u));
  };
  auto probe = concavity_check(flipped, art.adjoint, art.candidate, 0.5, 400);
  CHECK(probe.violations > 0);
}

TEST_CASE("piecewise multiplier structure is validated") {
  auto art = build_scenario("embedded_capacity", 64);
  CHECK(piecewise_adjoint_valid(art.adjoint, art.grid));

  auto bad = art.adjoint;
  bad.measures[0].atoms = {{1.0, -0.5}};
  CHECK_FALSE(piecewise_adjoint_valid(bad, art.grid));

  auto abnormal = art.adjoint;
  abnormal.lambda0 = 0.0;
  CHECK_FALSE(piecewise_adjoint_valid(abnormal, art.grid));
}

TEST_CASE("value difference margins against a disturbed admissible process") {
  auto art = build_scenario("lq_regulator", 128);
  // alternative pair built from a decaying state perturbation, so the
  // trajectory stays inside the comparison tube; u follows from the dynamics
  // x' = 2x + u
  const double eps = 0.05;
  auto x_alt = [base = art.candidate.x_exact, eps](double t) {
    return Vec(base(t).array() + eps * (std::exp(-t) - std::exp(-2.0 * t)));
  };
  auto u_alt = [base = art.candidate.u_exact, eps](double t) {
    return Vec(base(t).array() + eps * (-3.0 * std::exp(-t) + 4.0 * std::exp(-2.0 * t)));
  };
  auto grid = art.grid;
  Process alt = make_process(grid, x_alt, Vec(Vec::Zero(1)), u_alt, false);
  alt.x_exact = x_alt;
  alt.u_exact = u_alt;

  std::vector<double> T_list = {2.0, 4.0, 8.0, 16.0};
  auto rep = delta_T_check(art.problem, art.candidate, alt, art.adjoint, T_list);
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == T_list.size());
  for (const auto& row : rep.rows) CHECK(row.margin >= -1e-8);
}

TEST_CASE("combining reports demands the full bundle") {
  auto art = build_scenario("lq_regulator", 32);
  VerificationReport incomplete;
  incomplete.scenario = "partial";
  ConcavityProbe probe;
  CHECK_THROWS_AS(arrow_from_reports(incomplete, probe, true), Error);
}
