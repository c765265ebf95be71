#pragma once

#include "horizon/adjoint.hpp"
#include "horizon/pmp.hpp"

namespace horizon {

/// sup_{u in U} H(t, x, u, p, 1) with the maximizing sample.
HamiltonianMax hamiltonian_sup(const ControlProblem& problem, double t, const Vec& x,
                               const Vec& p);

struct ConcavityProbe {
  int samples = 0;
  int violations = 0;             // midpoint-concavity failures of sup-H
  int convexity_violations = 0;   // midpoint-convexity failures of some g_j
  double worst_violation = 0.0;
  double worst_convexity_violation = 0.0;
  double gamma = 0.0;
  unsigned seed = 0;
  double tolerance = 1e-9;
};

/// Midpoint test of concavity of sup-H in x and convexity of every g_j on the
/// gamma tube around the candidate trajectory.  Requires the normal form
/// (lambda0 = 1).
ConcavityProbe concavity_check(const ControlProblem& problem, const AdjointSolution& adj,
                               const Process& process, double gamma, int samples,
                               unsigned seed = 7, double tolerance = 1e-9);

struct DeltaTRow {
  double T = 0.0;
  double lhs = 0.0;     // Delta(T)
  double rhs = 0.0;     // <p(T), x(T)-x*(T)> - <p(0), x(0)-x*(0)>
  double margin = 0.0;  // lhs - rhs
};

struct DeltaTReport {
  std::vector<DeltaTRow> rows;
  double sup_state_deviation = 0.0;
  bool radius_ok = true;
  bool pass = false;  // margin >= -tol at every T
};

struct DeltaTOptions {
  bool enforce_radius = true;
  double tol = 1e-8;
  double quad_tol = 1e-10;
  std::vector<double> breakpoints;
};

DeltaTReport delta_T_check(const ControlProblem& problem, const Process& process_star,
                           const Process& process_alt, const AdjointSolution& adj,
                           const std::vector<double>& T_list, const DeltaTOptions& opts = {});

struct ArrowOptions {
  double tol = 1e-6;
  double max_gap_tol = 1e-6;
  int concavity_samples = 1000;
  unsigned seed = 11;
  double gamma = -1.0;  // <= 0 means problem.gamma
};

struct ArrowVerdict {
  VerificationReport report;  // the delegated necessary-condition entries
  ConcavityProbe probe;
  bool piecewise_adjoint_valid = false;
  bool pass = false;
};

/// Runs the full sufficiency bundle: necessary conditions in normal form,
/// piecewise-adjoint structure, concavity/convexity probes, slackness.
ArrowVerdict arrow_verdict(const ControlProblem& problem, const Process& process,
                           const AdjointSolution& adj, const SemiInfiniteGrid& grid,
                           const ArrowOptions& opts = {});

/// Structural admissibility of the multiplier bundle for the sufficiency
/// theorems: normal form, nonnegative sorted atoms, nonnegative densities at
/// the grid nodes, finite total jump.
bool piecewise_adjoint_valid(const AdjointSolution& adj, const SemiInfiniteGrid& grid);

/// Combines already-computed sub-reports; throws incomplete-verification when
/// a required entry is missing from the report.
bool arrow_from_reports(const VerificationReport& pmp_report, const ConcavityProbe& probe,
                        bool piecewise_adjoint_valid);

}  // namespace horizon
