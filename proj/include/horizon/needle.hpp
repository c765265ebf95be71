#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "horizon/problem.hpp"
#include "horizon/report.hpp"

namespace horizon {

using Rat = boost::multiprecision::cpp_rational;

struct RatInterval {
  Rat lo, hi;  // closed interval [lo, hi], lo <= hi
  Rat length() const { return hi - lo; }
};

/// Finite union of closed intervals with rational endpoints, kept sorted and
/// disjoint.  Measures, intersections and orderings are exact, so the set
/// identities of the variation construction are testable without tolerances.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<RatInterval> parts);  // normalizes

  static IntervalSet interval(const Rat& lo, const Rat& hi);

  const std::vector<RatInterval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  Rat measure() const;
  bool contains(const Rat& t) const;
  bool contains_set(const IntervalSet& other) const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  /// True when the interiors are disjoint (shared endpoints allowed).
  bool disjoint_with(const IntervalSet& other) const;

  /// Subset of this set between cumulative measure a and b (0 <= a <= b <= 1,
  /// fractions of the total measure), walking the parts from the left.
  IntervalSet measure_slice(const Rat& a, const Rat& b) const;

  std::vector<Rat> endpoints() const;

 private:
  std::vector<RatInterval> parts_;
};

/// Piecewise-constant function with rational breakpoints; the support of the
/// pieces is the compact set K of the construction.
struct StepPiece {
  Rat lo, hi;
  Vec value;
};

struct StepFunction {
  std::vector<StepPiece> pieces;  // sorted, interior-disjoint
  IntervalSet support() const;
  double max_norm() const;
  Vec eval(const Rat& t) const;  // zero off the support
};

struct NeedleFamily {
  IntervalSet K;
  std::vector<IntervalSet> cells;  // equal-measure subdivision Delta_1..Delta_r
  int d = 1;                       // number of variation directions
  Rat Delta;                       // simplex radius 1/d
  double delta = 0.0;              // accuracy parameter of the construction
  std::vector<Rat> alphas;         // requested parameter values

  /// M_i(alpha): within each cell, the measure window
  /// [(i-1)/d, (i-1)/d + alpha] of the cell.  Exact nesting in alpha and
  /// disjointness across directions for alpha <= 1/d.
  IntervalSet variation_set(int i, const Rat& alpha) const;
};

/// Equal-measure subdivision with cell measure <= delta / (2 max||y||) and the
/// per-direction window construction.
NeedleFamily build_variation_sets(const StepFunction& y, double delta,
                                  const std::vector<Rat>& alphas, int d = 1);

/// sup_t || int_{[0,t] cap K} (chi_{M_i(a)} - chi_{M_i(a')}) y dtau
///          - (a - a') int_{[0,t] cap K} y dtau ||_inf
/// evaluated exactly at the breakpoints of the piecewise-linear mismatch.
double needle_sup_bound_gap(const NeedleFamily& family, const StepFunction& y, int i,
                            const Rat& alpha, const Rat& alpha_prime);

/// u_alpha(t) = u*(t) + sum_i chi_{M_i(alpha_i)}(t) (u_i(t) - u*(t))
std::function<Vec(double)> needle_control(const std::function<Vec(double)>& u_star,
                                          const std::vector<std::function<Vec(double)>>& directions,
                                          const NeedleFamily& family, const std::vector<Rat>& alpha);

struct VariationGapReport {
  double trajectory_gap = 0.0;   // sup-norm mismatch of the dynamics integrals
  double cost_gap = 0.0;         // mismatch of the cost integrals
  double empirical_constant_trajectory = 0.0;  // gap / sum |alpha - alpha'|
  double empirical_constant_cost = 0.0;
  double sup_state_deviation = 0.0;  // ||x_alpha - x*||_inf over the grid
};

struct VariationGapOptions {
  bool enforce_radius = true;
  double quad_tol = 1e-10;
};

VariationGapReport variation_gap_check(const ControlProblem& problem, const Process& process,
                                       const NeedleFamily& family,
                                       const std::vector<std::function<Vec(double)>>& directions,
                                       const std::vector<Rat>& alpha,
                                       const std::vector<Rat>& alpha_prime,
                                       const SemiInfiniteGrid& grid,
                                       const VariationGapOptions& opts = {});

}  // namespace horizon
