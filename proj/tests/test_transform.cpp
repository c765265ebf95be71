#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horizon/scenarios.hpp"
#include "horizon/transform.hpp"

using namespace horizon;

TEST_CASE("horizon maps round trip") {
  for (const char* name : {"log", "rational"}) {
    auto map = HorizonMap::named(name);
    for (double t : {0.0, 0.3, 1.7, 5.0, 20.0}) {
      double s = map.s_of_t(t);
      CHECK(map.t_of_s(s) == doctest::Approx(t).epsilon(1e-7));
      CHECK(s >= 0.0);
      CHECK(s < 1.0);
    }
    // u-parametrized forms agree with the s forms away from the ideal point
    CHECK(map.t_of_u(0.25) == doctest::Approx(map.t_of_s(0.75)).epsilon(1e-12));
    CHECK(map.speed_of_u(0.25) == doctest::Approx(map.speed(0.75)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(HorizonMap::named("parabolic"), Error);
}

TEST_CASE("transformed dynamics reproduce the candidate trajectory") {
  auto art = build_scenario("lq_regulator", 96);
  auto tf = to_finite(art.problem, art.grid.map());
  auto u_star = art.candidate.u_exact;
  REQUIRE(u_star);

  std::vector<double> s_nodes;
  for (double t : art.grid.nodes()) s_nodes.push_back(art.grid.map().s_of_t(t));
  auto w = [&](double s) { return u_star(art.grid.map().t_of_s(s)); };
  auto ys = tf.integrate(w, art.candidate.state(0.0), s_nodes, OdeOptions{1e-12, 1e-11});

  double sup = 0.0;
  for (std::size_t k = 0; k < s_nodes.size(); ++k)
    sup = std::max(sup, (ys[k] - art.candidate.state(art.grid.node(k))).norm());
  CHECK(sup < 1e-7);
}

TEST_CASE("embedded window problems freeze outside the window") {
  auto art = build_scenario("embedded_lq", 128);
  // dynamics and running cost vanish beyond the window end t1 = 2
  Vec x = art.candidate.state(3.0);
  Vec u = Vec::Zero(1);
  CHECK(art.problem.phi(3.0, x, u).norm() == 0.0);
  CHECK(art.problem.f(3.0, x, u) == 0.0);
  CHECK((art.candidate.state(10.0) - art.candidate.state(2.0)).norm() < 1e-12);
}

TEST_CASE("finite-horizon optima do not converge to an optimal process") {
  const double rho = 0.5;
  auto table = pathology_demo(rho, 1.0, {5.0, 10.0, 20.0, 40.0});

  // tau(T) - T is the exact constant ln(1-rho)/rho for every row
  const double offset = std::log(1.0 - rho) / rho;
  CHECK(table.tau_offset == offset);
  for (const auto& r : table.rows) CHECK(r.tau - r.T == doctest::Approx(offset).epsilon(1e-12));

  // the pointwise limit u == 1 earns nothing, the T-optima earn plenty
  for (const auto& r : table.rows) {
    CHECK(std::abs(r.J_limit_process) < 1e-10);
    CHECK(r.J_T > 0.5);
    CHECK(r.J_infinite_of_T > r.J_T);
  }
  CHECK(table.limit_is_suboptimal);

  // J_T grows monotonically in T
  for (std::size_t k = 0; k + 1 < table.rows.size(); ++k)
    CHECK(table.rows[k].J_T < table.rows[k + 1].J_T);
}

TEST_CASE("horizons below the switching threshold are refused") {
  CHECK_THROWS_AS(pathology_demo(0.5, 1.0, {1.0}), Error);
}

TEST_CASE("classical readout of the embedded regulator") {
  auto run = run_scenario("embedded_lq");
  REQUIRE(run.pass);
  const auto* flat = run.report.find("ref-outside-flat");
  REQUIRE(flat != nullptr);
  CHECK(flat->residual < 1e-9);
  const auto* terminal = run.report.find("ref-terminal-readout");
  REQUIRE(terminal != nullptr);
  CHECK(terminal->residual < 1e-8);
  const auto* initial = run.report.find("ref-initial-readout");
  REQUIRE(initial != nullptr);
  CHECK(initial->residual < 1e-8);
}
