#pragma once

#include <functional>
#include <vector>

#include "horizon/problem.hpp"

namespace horizon {

using OdeRhs = std::function<Vec(double, const Vec&)>;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  std::size_t max_steps = 2'000'000;
};

/// Dormand-Prince 5(4) step from t to t+h; advances the state in place and
/// returns the embedded error estimate.
struct OdeResult {
  std::vector<double> times;
  std::vector<Vec> values;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

/// Adaptive embedded Runge-Kutta integration from times.front() to
/// times.back(), with output recorded exactly at the requested times
/// (monotone increasing or decreasing).  Throws a stiffness error on
/// step-size underflow.
OdeResult integrate_ivp(const OdeRhs& rhs, const Vec& x0, const std::vector<double>& times,
                        const OdeOptions& opts = {});

/// Convenience: final value only.
Vec integrate_to(const OdeRhs& rhs, const Vec& x0, double t0, double t1,
                 const OdeOptions& opts = {});

}  // namespace horizon
