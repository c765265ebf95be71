#pragma once

#include "horizon/adjoint.hpp"
#include "horizon/ode.hpp"
#include "horizon/problem.hpp"
#include "horizon/report.hpp"

namespace horizon {

/// Problem rewritten on [0,1) via t = t_map(s): states (y, t) with
/// y'(s) = v(s) phi(t(s), y, w), t'(s) = v(s).
struct TransformedProblem {
  const ControlProblem* base = nullptr;
  HorizonMap map;

  /// Integrates the transformed dynamics with control w(s); returns y at the
  /// requested s nodes (the clock component is dropped).
  std::vector<Vec> integrate(const std::function<Vec(double)>& w_of_s, const Vec& y0,
                             const std::vector<double>& s_nodes,
                             const OdeOptions& ode = {}) const;
};

TransformedProblem to_finite(const ControlProblem& problem, const HorizonMap& t_map);

/// Standard problem on [t0, t1] with terminal data depending on x only.
struct FiniteHorizonProblem {
  double t0 = 0.0, t1 = 1.0;
  int state_dim = 0;
  int control_dim = 0;
  std::function<double(double, const Vec&, const Vec&)> f;
  std::function<Vec(double, const Vec&, const Vec&)> f_x;
  std::function<Vec(double, const Vec&, const Vec&)> phi;
  std::function<Mat(double, const Vec&, const Vec&)> phi_x;
  std::vector<StateConstraint> constraints;
  std::function<Vec(const Vec&)> h0;
  std::function<Mat(const Vec&)> h0_x;
  std::function<Vec(const Vec&)> h1;  // terminal condition, may be null
  std::function<Mat(const Vec&)> h1_x;
  ControlSet control_set;
  double gamma = 0.5;
};

/// Infinite-horizon embedding: indicator density, dynamics and cost frozen to
/// zero outside [t0,t1], constraints extended by the relaxing branch
/// g(t0/t1, x) - (1 - e^{-(t-t0/1)^2}), which keeps the active sets inside the
/// window and the extension strictly slack elsewhere.
ControlProblem embed_finite(const FiniteHorizonProblem& fin);

struct ClassicalReadout {
  double outside_residual = 0.0;  // sup |pdot| outside [t0,t1]
  Vec p_t0, p_t1;                 // adjoint at the window ends (right limit at t1)
  double terminal_residual = 0.0;  // ||p(t1+) + h1_x^T l1|| (0-size h1: ||p(t1+)||)
  double initial_residual = 0.0;   // ||p(t0) - h0_x^T l0||
  std::vector<std::pair<double, double>> jump_table;  // (time, mass) inside window end
  double max_gap = 0.0;            // maximum-condition gap on [t0,t1]
};

/// Reads the classical finite-horizon maximum principle off a completed
/// verification run of the embedded problem.
ClassicalReadout classical_pmp_readout(const FiniteHorizonProblem& fin,
                                       const ControlProblem& embedded, const Process& process,
                                       const AdjointSolution& adj,
                                       const VerificationReport& embedded_run,
                                       const SemiInfiniteGrid& grid);

struct PathologyRow {
  double T = 0.0;
  double tau = 0.0;
  double J_T = 0.0;                // finite-horizon value of the T-optimal process
  double J_infinite_of_T = 0.0;    // its infinite-horizon value
  double J_limit_process = 0.0;    // value of the pointwise limit u == 1
};

struct PathologyTable {
  double rho = 0.0;
  double x0 = 1.0;
  double tau_offset = 0.0;  // ln(1-rho)/rho, equals tau - T for every row
  std::vector<PathologyRow> rows;
  bool limit_is_suboptimal = false;
};

PathologyTable pathology_demo(double rho, double x0, const std::vector<double>& T_list);

}  // namespace horizon
