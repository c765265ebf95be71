#include "horizon/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "horizon/quadrature.hpp"

namespace horizon {

HamiltonianMax hamiltonian_sup(const ControlProblem& problem, double t, const Vec& x,
                               const Vec& p) {
  return maximize_hamiltonian(problem, t, x, p, 1.0);
}

ConcavityProbe concavity_check(const ControlProblem& problem, const AdjointSolution& adj,
                               const Process& process, double gamma, int samples, unsigned seed,
                               double tolerance) {
  if (std::abs(adj.lambda0 - 1.0) > 1e-12)
    throw Error(ErrorCode::invalid_input, "concavity probe requires the normal form lambda0 = 1");
  ConcavityProbe probe;
  probe.samples = samples;
  probe.gamma = gamma;
  probe.seed = seed;
  probe.tolerance = tolerance;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> su(0.0, 0.97);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto& map = HorizonMap::log_map();
  const int n = problem.state_dim;

  for (int s = 0; s < samples; ++s) {
    double t = map.t_of_s(su(rng));
    Vec base = process.state(t);
    Vec xa(n), xb(n);
    for (int i = 0; i < n; ++i) {
      xa[i] = base[i] + gamma * unit(rng);
      xb[i] = base[i] + gamma * unit(rng);
    }
    Vec xm = 0.5 * (xa + xb);
    Vec p = adj.value_right(t);
    double ha = hamiltonian_sup(problem, t, xa, p).value;
    double hb = hamiltonian_sup(problem, t, xb, p).value;
    double hm = hamiltonian_sup(problem, t, xm, p).value;
    double viol = 0.5 * (ha + hb) - hm;  // positive means concavity failed
    probe.worst_violation = std::max(probe.worst_violation, viol);
    if (viol > tolerance) ++probe.violations;

    for (const auto& c : problem.constraints) {
      double conv = c.g(t, xm) - 0.5 * (c.g(t, xa) + c.g(t, xb));  // positive: not convex
      probe.worst_convexity_violation = std::max(probe.worst_convexity_violation, conv);
      if (conv > tolerance) ++probe.convexity_violations;
    }
  }
  return probe;
}

DeltaTReport delta_T_check(const ControlProblem& problem, const Process& process_star,
                           const Process& process_alt, const AdjointSolution& adj,
                           const std::vector<double>& T_list, const DeltaTOptions& opts) {
  DeltaTReport rep;
  double t_max = T_list.empty() ? 0.0 : *std::max_element(T_list.begin(), T_list.end());
  for (double t = 0.0; t <= t_max; t += std::max(t_max / 200.0, 1e-3)) {
    double dev = (process_alt.state(t) - process_star.state(t)).norm();
    rep.sup_state_deviation = std::max(rep.sup_state_deviation, dev);
  }
  rep.radius_ok = rep.sup_state_deviation <= problem.gamma;
  if (opts.enforce_radius && !rep.radius_ok)
    throw Error(ErrorCode::radius_exceeded,
                "alternative trajectory leaves the gamma tube (deviation " +
                    std::to_string(rep.sup_state_deviation) + ")");

  auto gap = [&](double t) {
    return problem.omega(t) * (problem.f(t, process_alt.state(t), process_alt.control(t)) -
                               problem.f(t, process_star.state(t), process_star.control(t)));
  };
  bool ok = true;
  for (double T : T_list) {
    DeltaTRow row;
    row.T = T;
    double acc = 0.0;
    std::vector<double> cuts = opts.breakpoints;
    cuts.push_back(0.0);
    cuts.push_back(T);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double a = std::clamp(cuts[k], 0.0, T), b = std::clamp(cuts[k + 1], 0.0, T);
      if (b > a) acc += integrate(gap, a, b, opts.quad_tol);
    }
    row.lhs = acc;
    Vec pT = adj.value_right(T);
    Vec p0 = adj.value(0.0);
    row.rhs = pT.dot(process_alt.state(T) - process_star.state(T)) -
              p0.dot(process_alt.state(0.0) - process_star.state(0.0));
    row.margin = row.lhs - row.rhs;
    if (row.margin < -opts.tol) ok = false;
    rep.rows.push_back(row);
  }
  rep.pass = ok && !rep.rows.empty();
  return rep;
}

bool piecewise_adjoint_valid(const AdjointSolution& adj, const SemiInfiniteGrid& grid) {
  if (std::abs(adj.lambda0 - 1.0) > 1e-12) return false;
  for (const auto& m : adj.measures) {
    if (m.atom_at_infinity < 0.0) return false;
    double prev = -1.0;
    for (const auto& [s, b] : m.atoms) {
      if (b < 0.0 || s < prev) return false;
      prev = s;
    }
    if (m.density)
      for (double t : grid.nodes())
        if (m.density(t) < 0.0) return false;
  }
  return std::isfinite(adj.jump_total());
}

ArrowVerdict arrow_verdict(const ControlProblem& problem, const Process& process,
                           const AdjointSolution& adj, const SemiInfiniteGrid& grid,
                           const ArrowOptions& opts) {
  ArrowVerdict v;
  double gamma = opts.gamma > 0.0 ? opts.gamma : problem.gamma;

  auto res = adjoint_residual(adj, problem, process, grid);
  v.report.add({"adjoint-residual", res.ode_residual, opts.tol,
                res.ode_residual <= opts.tol, res.worst_time, ""});
  v.report.add({"jump-identity", res.jump_residual, opts.tol, res.jump_residual <= opts.tol,
                0.0, ""});

  auto tv = transversality_check(adj, problem, process, problem.endpoint_kind, grid);
  double tv_res = std::max({tv.initial_residual, tv.limit_residual});
  v.report.add({"transversality", tv_res, opts.tol, tv_res <= opts.tol, grid.last(), ""});

  auto nt = nontriviality_check(adj);
  v.report.add({"nontriviality", nt.nontrivial ? 0.0 : 1.0, 0.5, nt.nontrivial, 0.0,
                "dominant " + nt.dominant});

  v.report.add(max_condition_check(problem, process, adj, grid, {opts.max_gap_tol, true}));
  v.report.add(slackness_check(adj, problem, process, grid, opts.tol));

  v.probe = concavity_check(problem, adj, process, gamma, opts.concavity_samples, opts.seed);
  v.report.add({"concavity", v.probe.worst_violation, v.probe.tolerance,
                v.probe.violations == 0, 0.0,
                std::to_string(v.probe.samples) + " samples"});
  v.report.add({"convexity", v.probe.worst_convexity_violation, v.probe.tolerance,
                v.probe.convexity_violations == 0, 0.0, "sampled"});

  v.piecewise_adjoint_valid = piecewise_adjoint_valid(adj, grid);
  v.report.flags["piecewise_adjoint_valid"] = v.piecewise_adjoint_valid;
  v.pass = v.report.all_pass() && v.piecewise_adjoint_valid;
  return v;
}

bool arrow_from_reports(const VerificationReport& pmp_report, const ConcavityProbe& probe,
                        bool piecewise_adjoint_valid) {
  for (const char* name :
       {"adjoint-residual", "transversality", "nontriviality", "max-condition", "slackness"})
    if (!pmp_report.find(name))
      throw Error(ErrorCode::incomplete_verification,
                  std::string("missing sub-report: ") + name);
  bool ok = piecewise_adjoint_valid && probe.violations == 0 && probe.convexity_violations == 0;
  for (const auto& e : pmp_report.entries)
    if (!e.pass) ok = false;
  return ok;
}

}  // namespace horizon
