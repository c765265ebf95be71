#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "horizon/problem.hpp"

using namespace horizon;

namespace {

Vec v1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}

}  // namespace

TEST_CASE("control set membership and sampling") {
  auto fin = ControlSet::finite({v1(0.0), v1(1.0)});
  CHECK(fin.contains(v1(1.0)));
  CHECK_FALSE(fin.contains(v1(0.5)));
  CHECK(fin.samples().size() == 2);

  auto box = ControlSet::interval(-2.0, 2.0, 41);
  CHECK(box.contains(v1(1.37)));
  CHECK_FALSE(box.contains(v1(2.5)));
  CHECK(box.samples().size() == 41);
}

TEST_CASE("convergent function interpolation and limit") {
  auto grid = make_grid(HorizonMap::log_map(), 32);
  auto fn = [](double t) { return v1(std::exp(-t)); };
  auto cf = ConvergentFunction::sample(grid, fn, v1(0.0));
  CHECK(cf.eval(0.0)[0] == doctest::Approx(1.0));
  // beyond the last node the value freezes at the limit
  CHECK(cf.eval(1e9)[0] == doctest::Approx(0.0));
  // linear interpolation error stays modest on the coarse grid
  CHECK(std::abs(cf.eval(0.7)[0] - std::exp(-0.7)) < 1e-2);
  CHECK(cf.tail_gap() == doctest::Approx(cf.values().back().norm()).epsilon(1e-12));
}

TEST_CASE("norm equivalence on randomized convergent functions") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);
  std::uniform_real_distribution<double> rate(0.2, 2.0);
  std::uniform_int_distribution<int> dim_d(1, 4);
  auto grid = make_grid(HorizonMap::log_map(), 64);

  for (int trial = 0; trial < 1000; ++trial) {
    int n = dim_d(rng);
    std::vector<double> a(n), c(n), r(n);
    for (int i = 0; i < n; ++i) {
      a[i] = amp(rng);
      c[i] = amp(rng);
      r[i] = rate(rng);
    }
    auto fn = [&](double t) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = a[i] + c[i] * std::exp(-r[i] * t);
      return v;
    };
    Vec lim(n);
    for (int i = 0; i < n; ++i) lim[i] = a[i];
    auto cf = ConvergentFunction::sample(grid, fn, lim);
    auto norms = clim_norms(cf);
    CHECK(norms.sup_norm <= norms.split_norm + 1e-12);
    CHECK(norms.split_norm <= 3.0 * norms.sup_norm + 1e-12);
  }
}

TEST_CASE("the ratio-3 witness achieves split == 3 sup exactly") {
  auto grid = make_grid(HorizonMap::log_map(), 64);
  auto fn = [](double t) { return v1(std::exp(-t) - 0.5); };
  auto cf = ConvergentFunction::sample(grid, fn, v1(-0.5));
  auto norms = clim_norms(cf);
  // sup |x| = 0.5 (attained at t = 0 and at the limit), sup |x - a| = 1,
  // |a| = 0.5, so split / sup = 3 with no rounding slack
  CHECK(norms.sup_norm == 0.5);
  CHECK(norms.split_norm == 1.5);
  CHECK(norms.split_norm / norms.sup_norm == 3.0);
}

TEST_CASE("piecewise constant control evaluation") {
  auto grid = make_grid(HorizonMap::log_map(), 16);
  auto x_fn = [](double t) { return v1(std::exp(-t)); };
  auto u_fn = [](double t) { return v1(t < 1.0 ? 1.0 : 0.0); };
  Process proc = make_process(grid, x_fn, v1(0.0), u_fn);
  CHECK(proc.control(0.0)[0] == 1.0);
  CHECK(proc.state(0.0)[0] == doctest::Approx(1.0));
  // segment control samples strictly inside the segment
  double a = grid.node(3), b = grid.node(4);
  CHECK(proc.segment_control(a, b)[0] == u_fn(0.5 * (a + b))[0]);
}

TEST_CASE("finite difference jacobian validation flags a wrong gradient") {
  ControlProblem prob;
  prob.state_dim = 1;
  prob.control_dim = 1;
  prob.f = [](double, const Vec& x, const Vec& u) { return x[0] * x[0] + u[0] * u[0]; };
  prob.f_x = [](double, const Vec& x, const Vec&) { return v1(2.0 * x[0]); };
  prob.phi = [](double, const Vec& x, const Vec& u) { return v1(-x[0] + u[0]); };
  prob.phi_x = [](double, const Vec&, const Vec&) {
    Mat m(1, 1);
    m(0, 0) = -1.0;
    return m;
  };
  prob.omega = [](double t) { return std::exp(-t); };
  prob.control_set = ControlSet::interval(-1.0, 1.0, 21);

  auto grid = make_grid(HorizonMap::log_map(), 16);
  auto proc = make_process(
      grid, [](double t) { return v1(std::exp(-t)); }, v1(0.0),
      [](double) { return v1(0.0); });

  CHECK(validate_jacobians(prob, proc).pass);

  ControlProblem bad = prob;
  bad.f_x = [](double, const Vec& x, const Vec&) { return v1(3.0 * x[0]); };
  CHECK_FALSE(validate_jacobians(bad, proc).pass);
}
