#pragma once

#include <functional>
#include <vector>

#include "horizon/grid.hpp"

namespace horizon {

/// Adaptive Simpson on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// tanh-sinh rule; tolerates integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

/// Improper integral of f over [0,inf), evaluated in the compactified
/// variable of `map`.  Breakpoints (switch times, indicator edges) split the
/// integration range so each piece is smooth.
double integrate_semi_infinite(const std::function<double(double)>& f, const HorizonMap& map,
                               double tol = 1e-12, const std::vector<double>& breakpoints = {});

struct TailDecayCertificate {
  double value = 0.0;       // extrapolated integral over [0,inf)
  double truncation = 0.0;  // T of the dyadic ladder
  double ratio = 0.0;       // tail(2T..4T) / tail(T..2T)
  bool summable = false;
};

/// Dyadic tail-ratio certificate for int_0^inf |f|: the tails over [T,2T] and
/// [2T,4T] must decay by a factor below `decay` for the integral to count as
/// summable.  A numeric proxy for the standing summability hypotheses.
TailDecayCertificate summability_certificate(const std::function<double(double)>& f_abs,
                                             double T = 16.0, double decay = 0.9,
                                             double tol = 1e-9);

/// Fourth-order cumulative integral of uniformly sampled values with spacing h.
std::vector<double> cumulative_integral(const std::vector<double>& g, double h);

}  // namespace horizon
