#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horizon/pmp.hpp"
#include "horizon/scenarios.hpp"

using namespace horizon;

TEST_CASE("hamiltonian maximization finds the quadratic optimum") {
  auto art = build_scenario("lq_regulator", 64);
  double t = art.grid.node(5);
  Vec x = art.candidate.state(t);
  Vec p = art.adjoint.value(t);
  auto mx = maximize_hamiltonian(art.problem, t, x, p, 1.0);
  // argmax of -omega (x^2+u^2)/2 + p (2x+u) is u = p / omega
  double expected = p[0] / std::exp(-2.0 * t);
  CHECK(mx.argmax[0] == doctest::Approx(expected).epsilon(1e-6));
  CHECK_FALSE(mx.unbounded_hint);
}

TEST_CASE("maximum condition holds along the candidates") {
  for (const char* name : {"lq_regulator", "ramsey_budget", "resource_case_c"}) {
    auto art = build_scenario(name, 96);
    auto entry = max_condition_check(art.problem, art.candidate, art.adjoint, art.grid);
    INFO("scenario ", name);
    CHECK(entry.pass);
    CHECK(entry.residual < 1e-7);
  }
}

TEST_CASE("a control offset breaks the maximum condition visibly") {
  for (const char* name : {"lq_regulator", "ramsey_budget"}) {
    auto art = build_scenario(name, 96);
    Process perturbed = art.candidate;
    for (auto& u : perturbed.u_nodes) u.array() += 0.1;
    auto base_u = art.candidate.u_exact;
    if (base_u)
      perturbed.u_exact = [base_u](double t) { return Vec(base_u(t).array() + 0.1); };
    MaxConditionOptions opts;
    opts.tolerance = 1e-3;
    auto entry = max_condition_check(art.problem, perturbed, art.adjoint, art.grid, opts);
    INFO("scenario ", name);
    CHECK_FALSE(entry.pass);
    CHECK(entry.residual > 1e-3);
  }
}

TEST_CASE("admissibility flags distinguish the tail classes") {
  auto lq = build_scenario("lq_regulator", 64);
  auto flags = admissibility_class_check(lq.problem, lq.candidate, lq.grid);
  CHECK(flags.adm);
  CHECK(flags.lip);
  // ||phi_x|| == 2 along the ray, so the strong tail condition fails
  CHECK_FALSE(flags.lim_cond1);

  auto ramsey = build_scenario("ramsey_budget", 64);
  auto rf = admissibility_class_check(ramsey.problem, ramsey.candidate, ramsey.grid);
  CHECK(rf.adm);
  CHECK(rf.lim_cond1);
  CHECK(rf.lim_cond2);
  CHECK(rf.cost_integral == doctest::Approx(-2.5).epsilon(1e-6));
}

TEST_CASE("active sets and complementary slackness") {
  auto art = build_scenario("embedded_capacity", 128);
  // the capacity bound x <= 0.5 is active from t = 0.5 on
  auto as = active_set(art.problem, art.candidate, 0, art.grid);
  REQUIRE_FALSE(as.times.empty());
  CHECK(as.times.front() >= 0.5 - 1e-9);
  auto entry = slackness_check(art.adjoint, art.problem, art.candidate, art.grid);
  CHECK(entry.pass);

  // moving the atom off the active set must violate slackness
  auto moved = art.adjoint;
  moved.measures[0].atoms = {{0.25, 0.5}};
  auto entry2 = slackness_check(moved, art.problem, art.candidate, art.grid);
  CHECK_FALSE(entry2.pass);
}

TEST_CASE("unbounded hamiltonian growth is flagged") {
  auto art = build_scenario("lq_regulator", 32);
  // a linear-in-u hamiltonian over a box maximizes at the rim; with the probe
  // enabled the growth under box enlargement is reported
  ControlProblem linear = art.problem;
  linear.f = [](double, const Vec&, const Vec&) { return 0.0; };
  linear.f_x = [](double, const Vec&, const Vec&) { return Vec(Vec::Zero(1)); };
  double t = art.grid.node(3);
  Vec x = art.candidate.state(t);
  Vec p(1);
  p << 1.0;
  auto mx = maximize_hamiltonian(linear, t, x, p, 1.0, true);
  CHECK(mx.unbounded_hint);
}
