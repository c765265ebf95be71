#pragma once

#include <memory>
#include <optional>

#include "horizon/adjoint.hpp"
#include "horizon/pmp.hpp"
#include "horizon/problem.hpp"
#include "horizon/report.hpp"
#include "horizon/sufficiency.hpp"
#include "horizon/transform.hpp"

namespace horizon {

/// Bang-bang switching time of the budget-constrained growth model: root of
///   e^{(1-rho) tau} (1/rho + 1/(1-rho)) = Z + 1/(1-rho),
/// bisected to 1e-12.  Requires rho in (0,1) and Z > 1/rho.
double solve_switching_time(double rho, double Z);

/// Production function of the resource-extraction model, supplied with its
/// derivative and the inverse of the derivative.
struct ResourceFSpec {
  std::function<double(double)> f;
  std::function<double(double)> fp;
  std::function<double(double)> fp_inv;
};

/// The default instantiation f(u) = ln(1+u).
ResourceFSpec resource_log_f();

/// Total extraction of the depletion family with horizon tau:
///   U(tau) = int_0^tau u_tau(t) dt,  f'(u_tau(t)) = (q + kappa e^{r(t-tau)})/d.
double resource_total_extraction(const ResourceFSpec& fs, double r, double d, double q,
                                 double tau, double quad_tol = 1e-12);

struct ResourceClassification {
  std::string label;  // "A" or "C"
  std::optional<double> t_prime;
  double d = 0.0;      // (r - ac)/r
  double kappa = 0.0;  // d f'(0) - q
};

/// Classifies the extraction problem and, in the depletion case, recovers the
/// exhaustion time t' from U(t') = x0 by bisection.
ResourceClassification resource_extraction_threshold(const ResourceFSpec& fs, double r, double a,
                                                     double c, double q, double x0);

struct ScenarioRunOptions {
  int N = 0;  // 0 keeps the scenario default
  double tol_abs = 1e-6;
  double tol_rel = 1e-6;
  unsigned seed = 2024;
  bool with_sufficiency = true;
};

/// Everything a scenario run produced besides the verdict; kept alive so the
/// CLI can export trajectories, adjoints and plot data.
struct ScenarioArtifacts {
  ControlProblem problem;
  SemiInfiniteGrid grid;
  Process candidate;
  AdjointSolution adjoint;  // reference multiplier bundle
  std::vector<double> breakpoints;
};

struct ScenarioRun {
  VerificationReport report;
  bool pass = false;
  bool rejected = false;  // true when an expected-failure scenario was rejected
  int N = 0;
  double runtime_seconds = 0.0;
  std::shared_ptr<ScenarioArtifacts> artifacts;
};

std::vector<std::string> scenario_names();
bool scenario_exists(const std::string& name);
bool scenario_expects_rejection(const std::string& name);

/// Problem + candidate + reference multipliers for a registered scenario.
ScenarioArtifacts build_scenario(const std::string& name, int N);

/// Full verification run against the closed-form references.
ScenarioRun run_scenario(const std::string& name, const ScenarioRunOptions& opts = {});

/// Runs the necessary-condition suite (and optionally sufficiency) for a
/// registered problem against an imported trajectory/control table.  The grid
/// is taken from the supplied times; the scenario's reference multipliers are
/// used as the certificate under test.
ScenarioRun verify_process(const std::string& name, const std::vector<double>& times,
                           const std::vector<Vec>& x, const std::vector<Vec>& u,
                           const Vec& x_limit, const ScenarioRunOptions& opts = {});

/// Per-scenario overrides (grid size, tolerances) from a JSON config file
/// keyed by scenario name; missing file or missing keys keep the defaults.
ScenarioRunOptions scenario_config(const std::string& name, const std::string& config_path,
                                   const ScenarioRunOptions& base = {});

}  // namespace horizon
