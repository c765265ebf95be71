#include "horizon/transform.hpp"

#include <algorithm>
#include <cmath>

#include "horizon/pmp.hpp"
#include "horizon/quadrature.hpp"

namespace horizon {

std::vector<Vec> TransformedProblem::integrate(const std::function<Vec(double)>& w_of_s,
                                               const Vec& y0, const std::vector<double>& s_nodes,
                                               const OdeOptions& ode) const {
  const int n = base->state_dim;
  Vec aug(n + 1);
  aug.head(n) = y0;
  aug[n] = map.t_of_s(s_nodes.front());
  auto rhs = [&](double s, const Vec& v) {
    double speed = map.speed(s);
    Vec out(n + 1);
    out.head(n) = speed * base->phi(v[n], v.head(n), w_of_s(s));
    out[n] = speed;
    return out;
  };
  auto res = integrate_ivp(rhs, aug, s_nodes, ode);
  std::vector<Vec> out;
  out.reserve(res.values.size());
  for (const auto& v : res.values) out.push_back(v.head(n));
  return out;
}

TransformedProblem to_finite(const ControlProblem& problem, const HorizonMap& t_map) {
  if (std::abs(t_map.t_of_s(0.0)) > 1e-12)
    throw Error(ErrorCode::invalid_input, "time map must start at t(0) = 0");
  for (int k = 0; k < 64; ++k) {
    double s = k / 64.0;
    if (!(t_map.speed(s) > 0.0))
      throw Error(ErrorCode::invalid_input, "time map must have positive speed on [0,1)");
  }
  TransformedProblem tp;
  tp.base = &problem;
  tp.map = t_map;
  return tp;
}

ControlProblem embed_finite(const FiniteHorizonProblem& fin) {
  if (!(fin.t0 < fin.t1)) throw Error(ErrorCode::invalid_input, "need t0 < t1");
  const double t0 = fin.t0, t1 = fin.t1;
  auto inside = [t0, t1](double t) { return t >= t0 && t <= t1; };

  ControlProblem p;
  p.state_dim = fin.state_dim;
  p.control_dim = fin.control_dim;
  p.gamma = fin.gamma;
  p.control_set = fin.control_set;
  p.omega = [t0, t1](double t) { return (t >= t0 && t <= t1) ? 1.0 : 0.0; };
  p.omega_l1 = t1 - t0;
  p.f = [fin, inside](double t, const Vec& x, const Vec& u) {
    return inside(t) ? fin.f(t, x, u) : 0.0;
  };
  p.f_x = [fin, inside](double t, const Vec& x, const Vec& u) {
    return inside(t) ? fin.f_x(t, x, u) : Vec::Zero(fin.state_dim).eval();
  };
  p.phi = [fin, inside](double t, const Vec& x, const Vec& u) {
    return inside(t) ? fin.phi(t, x, u) : Vec::Zero(fin.state_dim).eval();
  };
  p.phi_x = [fin, inside](double t, const Vec& x, const Vec& u) {
    return inside(t) ? fin.phi_x(t, x, u)
                     : Mat::Zero(fin.state_dim, fin.state_dim).eval();
  };
  for (const auto& c : fin.constraints) {
    StateConstraint ext;
    ext.g = [c, t0, t1](double t, const Vec& x) {
      double tc = std::clamp(t, t0, t1);
      double q = t - tc;
      return c.g(tc, x) - (1.0 - std::exp(-q * q));
    };
    ext.g_x = [c, t0, t1](double t, const Vec& x) {
      return c.g_x(std::clamp(t, t0, t1), x);
    };
    p.constraints.push_back(std::move(ext));
  }
  if (fin.h0) {
    p.h0 = fin.h0;
    p.h0_x = fin.h0_x;
  }
  if (fin.h1) {
    p.h1 = [fin](double, const Vec& x) { return fin.h1(x); };
    p.h1_x = [fin](double, const Vec& x) { return fin.h1_x(x); };
    p.endpoint_kind = EndpointKind::fixed_endpoint;
  } else {
    p.endpoint_kind = EndpointKind::free_endpoint;
  }
  return p;
}

ClassicalReadout classical_pmp_readout(const FiniteHorizonProblem& fin,
                                       const ControlProblem& embedded, const Process& process,
                                       const AdjointSolution& adj,
                                       const VerificationReport& embedded_run,
                                       const SemiInfiniteGrid& grid) {
  if (embedded_run.entries.empty())
    throw Error(ErrorCode::incomplete_verification,
                "classical readout requires a completed embedded verification run");
  ClassicalReadout out;
  out.p_t0 = adj.value(fin.t0);
  out.p_t1 = adj.value_right(fin.t1);

  // the adjoint must be flat outside the window
  const auto& nodes = grid.nodes();
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double a = nodes[k], b = nodes[k + 1];
    if (b <= fin.t0 + 1e-12 || a >= fin.t1 - 1e-12) {
      Vec pa = adj.value_right(a), pb = adj.value(b);
      double slope = (pb - pa).lpNorm<Eigen::Infinity>() / (b - a);
      out.outside_residual = std::max(out.outside_residual, slope);
    }
  }

  if (fin.h1) {
    if (adj.l1.size() != fin.h1(process.state(fin.t1)).size())
      throw Error(ErrorCode::invalid_input, "l1 size does not match the terminal map");
    out.terminal_residual =
        (out.p_t1 + fin.h1_x(process.state(fin.t1)).transpose() * adj.l1).norm();
  } else {
    out.terminal_residual = out.p_t1.norm();
  }
  if (fin.h0 && adj.l0.size())
    out.initial_residual =
        (out.p_t0 - fin.h0_x(process.state(fin.t0)).transpose() * adj.l0).norm();

  for (const auto& m : adj.measures)
    for (const auto& [s, b] : m.atoms)
      if (s >= fin.t0 - 1e-12 && s <= fin.t1 + 1e-12) out.jump_table.emplace_back(s, b);

  auto H = pontryagin_function(embedded);
  for (double t : nodes) {
    if (t < fin.t0 || t > fin.t1) continue;
    Vec x = process.state(t);
    Vec p = adj.value_right(t);
    double h_star = H(t, x, process.control(t), p, adj.lambda0);
    auto mx = maximize_hamiltonian(embedded, t, x, p, adj.lambda0);
    out.max_gap = std::max(out.max_gap, (mx.value - h_star) / (1.0 + std::abs(h_star)));
  }
  return out;
}

PathologyTable pathology_demo(double rho, double x0, const std::vector<double>& T_list) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::invalid_input, "rho must lie in (0,1)");
  PathologyTable table;
  table.rho = rho;
  table.x0 = x0;
  table.tau_offset = std::log(1.0 - rho) / rho;

  const auto& map = HorizonMap::log_map();
  for (double T : T_list) {
    double tau = T + table.tau_offset;
    if (!(tau > 0.0))
      throw Error(ErrorCode::horizon_too_short,
                  "T = " + std::to_string(T) + " gives a nonpositive switching time");
    PathologyRow row;
    row.T = T;
    row.tau = tau;
    auto x_of = [&](double t) { return t < tau ? x0 * std::exp(t) : x0 * std::exp(tau); };
    auto u_of = [&](double t) { return t < tau ? 1.0 : 0.0; };
    auto integrand = [&](double t) { return std::exp(-rho * t) * (1.0 - u_of(t)) * x_of(t); };
    row.J_T = integrate(integrand, 0.0, tau, 1e-12) + integrate(integrand, tau, T, 1e-12);
    row.J_infinite_of_T = integrate_semi_infinite(integrand, map, 1e-12, {tau, T});
    // pointwise limit of the finite-horizon optima: u == 1, zero integrand
    row.J_limit_process = integrate_semi_infinite(
        [&](double t) { return std::exp(-rho * t) * (1.0 - 1.0) * x0 * std::exp(t); }, map,
        1e-12);
    table.rows.push_back(row);
  }
  table.limit_is_suboptimal = true;
  for (const auto& r : table.rows)
    if (!(r.J_infinite_of_T > r.J_limit_process + 1e-6)) table.limit_is_suboptimal = false;
  return table;
}

}  // namespace horizon
