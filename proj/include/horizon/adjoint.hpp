#pragma once

#include <optional>

#include "horizon/linear_ode.hpp"
#include "horizon/problem.hpp"
#include "horizon/report.hpp"

namespace horizon {

/// Nonnegative Borel measure on [0,inf] split into an absolutely continuous
/// density, finitely many atoms, and an atom at the ideal point.
struct BorelMeasureExt {
  std::function<double(double)> density;            // may be null (zero density)
  std::vector<std::pair<double, double>> atoms;     // (time, mass), sorted
  double atom_at_infinity = 0.0;
  double support_tolerance = 1e-7;

  double density_at(double t) const { return density ? density(t) : 0.0; }
  double atom_sum() const;
  double total_mass(const HorizonMap& map = HorizonMap::log_map()) const;
};

/// Multiplier bundle for one candidate process.  Node values of p are the
/// left-sided limits; jumps carry the atom-induced discontinuities.
struct AdjointSolution {
  ConvergentFunction p;
  std::function<Vec(double)> p_exact;           // optional closed form, left-continuous
  std::vector<std::pair<double, Vec>> jumps;    // (time, p(s+) - p(s))
  double lambda0 = 1.0;
  Vec l0, l1;                                   // sized s0 / s1, possibly empty
  double l0_fit_residual = 0.0;
  double l1_fit_residual = 0.0;
  std::vector<BorelMeasureExt> measures;        // one per state constraint
  Vec p_limit;

  Vec value(double t) const;        // left-continuous evaluation
  Vec value_right(double t) const;  // right-sided limit at jump times
  Vec jump_delta(double t) const;
  double jump_total() const;        // sum of jump magnitudes
};

struct AdjointComputeOptions {
  bool enforce_summability = true;  // of the representation-formula integrand
  double tail_step = 1.0;           // marching step beyond the grid
  double tail_tol = 1e-11;          // relative tail cut-off
  double t_cap = 200.0;
  OdeOptions ode{1e-12, 1e-10, 1e-3, 1e-14, 4'000'000};
};

/// Free-endpoint adjoint from the integral representation
///   p(t) = -Z*(t) int_t^inf Y*^T(s) omega(s) f_x(s, x*, u*) ds
/// in normal form (lambda0 = 1).  The fundamental matrices are carried along
/// the same integration, so no separate summability of phi_x is demanded;
/// what must decay is the representation integrand itself.
AdjointSolution adjoint_free_endpoint(const ControlProblem& problem, const Process& process,
                                      const SemiInfiniteGrid& grid,
                                      const AdjointComputeOptions& opts = {});

struct AdjointResidualReport {
  double ode_residual = 0.0;   // sup over jump-free intervals
  double worst_time = 0.0;
  double jump_residual = 0.0;  // worst atom-jump identity mismatch
  double bounded_variation = 0.0;  // sum of jump magnitudes plus int ||pdot||
};

/// Residual of the measure-augmented adjoint equation
///   pdot = -H_x(t, x*, u*, p, lambda0) + sum_j lambda_j(t) g_jx(t, x*)
/// between atoms, plus the jump identity p(s+) - p(s) = sum_j beta_jn g_jx
/// at each atom.  With a closed-form p the derivative is taken by central
/// differences; otherwise a Hermite-Simpson collocation defect per grid
/// interval is reported (three-point differences on the node values cannot
/// reach the tolerances the closed forms satisfy).
AdjointResidualReport adjoint_residual(const AdjointSolution& adj, const ControlProblem& problem,
                                       const Process& process, const SemiInfiniteGrid& grid);

struct TransversalityReport {
  double initial_residual = 0.0;  // ||p(0) - h0_x^T l0||
  double limit_residual = 0.0;    // ||p_lim + h1_x^T l1 + sum g_jx mu_j({inf})||
  double natural_pairing = 0.0;   // |<p(t_N), x*(t_N)>|
  double michel_value = 0.0;      // |H| at the last node
  double p_limit_norm = 0.0;
};

TransversalityReport transversality_check(const AdjointSolution& adj, const ControlProblem& problem,
                                          const Process& process, EndpointKind kind,
                                          const SemiInfiniteGrid& grid);

struct NontrivialityReport {
  bool nontrivial = false;
  double magnitude = 0.0;
  std::string dominant;
};

NontrivialityReport nontriviality_check(const AdjointSolution& adj, double threshold = 1e-9,
                                        const HorizonMap& map = HorizonMap::log_map());

}  // namespace horizon
