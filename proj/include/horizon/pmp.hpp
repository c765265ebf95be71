#pragma once

#include "horizon/adjoint.hpp"
#include "horizon/problem.hpp"
#include "horizon/report.hpp"

namespace horizon {

/// H(t, x, u, p, lambda0) = -lambda0 omega(t) f(t,x,u) + <p, phi(t,x,u)>
std::function<double(double, const Vec&, const Vec&, const Vec&, double)>
pontryagin_function(const ControlProblem& problem);

struct HamiltonianMax {
  double value = 0.0;
  Vec argmax;
  bool unbounded_hint = false;  // max keeps growing under box enlargement
};

/// Sampled maximization of H over the control set, with coordinate-wise
/// golden-section refinement around the best sample for box sets.
HamiltonianMax maximize_hamiltonian(const ControlProblem& problem, double t, const Vec& x,
                                    const Vec& p, double lambda0,
                                    bool probe_unbounded = false);

struct MaxConditionOptions {
  double tolerance = 1e-6;  // on the Hamiltonian gap plus the distance to U
  bool probe_unbounded = true;
};

ConditionEntry max_condition_check(const ControlProblem& problem, const Process& process,
                                   const AdjointSolution& adj, const SemiInfiniteGrid& grid,
                                   const MaxConditionOptions& opts = {});

struct AdmissibilityFlags {
  bool adm = false;        // boundary maps + constraints + finite cost
  bool lim_cond1 = false;  // int ||phi|| and int ||phi_x|| summable
  bool lim_cond2 = false;  // sampled perturbation tail decay
  bool lip = false;        // bounded state-Jacobian near the trajectory
  double cost_integral = 0.0;
  std::string detail;
};

struct AdmissibilityOptions {
  double tol = 1e-6;
  double decay = 0.9;    // tail-ratio factor shared with the certificates
  int pairs = 20;        // sampled perturbation pairs for the Lipschitz tail test
  unsigned seed = 417;
};

AdmissibilityFlags admissibility_class_check(const ControlProblem& problem, const Process& process,
                                             const SemiInfiniteGrid& grid,
                                             const AdmissibilityOptions& opts = {});

struct ActiveSet {
  std::vector<double> times;
  bool at_infinity = false;
};

ActiveSet active_set(const ControlProblem& problem, const Process& process, std::size_t j,
                     const SemiInfiniteGrid& grid, double activation_tol = 1e-7);

ConditionEntry slackness_check(const AdjointSolution& adj, const ControlProblem& problem,
                               const Process& process, const SemiInfiniteGrid& grid,
                               double tolerance = 1e-6);

}  // namespace horizon
