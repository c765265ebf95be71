#include "horizon/adjoint.hpp"

#include <algorithm>
#include <cmath>

namespace horizon {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

Mat unflat(const Vec& v, int n, int off) {
  Mat m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = v[off + c * n + r];
  return m;
}

void flat_into(const Mat& m, Vec& v, int off) {
  const int n = static_cast<int>(m.rows());
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) v[off + c * n + r] = m(r, c);
}

}  // namespace

double BorelMeasureExt::atom_sum() const {
  double s = 0.0;
  for (const auto& [t, b] : atoms) s += b;
  return s;
}

double BorelMeasureExt::total_mass(const HorizonMap& map) const {
  double s = atom_sum() + atom_at_infinity;
  if (density) {
    std::vector<double> breaks;
    for (const auto& [t, b] : atoms) breaks.push_back(t);
    s += integrate_semi_infinite([this](double t) { return density(t); }, map, 1e-10, breaks);
  }
  return s;
}

Vec AdjointSolution::jump_delta(double t) const {
  for (const auto& [s, d] : jumps)
    if (near(s, t)) return d;
  return Vec::Zero(p_limit.size() ? p_limit.size() : p.dim());
}

double AdjointSolution::jump_total() const {
  double s = 0.0;
  for (const auto& [t, d] : jumps) s += d.norm();
  return s;
}

Vec AdjointSolution::value(double t) const {
  if (p_exact) return p_exact(t);
  const auto& times = p.times();
  const auto& vals = p.values();
  if (t <= times.front()) return vals.front();
  if (t >= times.back()) {
    if (near(t, times.back())) return vals.back();
    return p_limit.size() ? p_limit : p.limit();
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (near(t, times[k + 1])) return vals[k + 1];
  Vec left = vals[k] + jump_delta(times[k]);
  double w = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - w) * left + w * vals[k + 1];
}

Vec AdjointSolution::value_right(double t) const { return value(t) + jump_delta(t); }

AdjointSolution adjoint_free_endpoint(const ControlProblem& problem, const Process& process,
                                      const SemiInfiniteGrid& grid,
                                      const AdjointComputeOptions& opts) {
  if (problem.endpoint_kind != EndpointKind::free_endpoint)
    throw Error(ErrorCode::invalid_input, "representation formula needs a free endpoint");
  const int n = problem.state_dim;
  const auto& nodes = grid.nodes();

  // augmented state [Y flat | Z flat | C], C(t) = int_0^t Y^T omega f_x
  const int nn = n * n;
  Vec aug = Vec::Zero(2 * nn + n);
  flat_into(Mat::Identity(n, n), aug, 0);
  flat_into(Mat::Identity(n, n), aug, nn);

  auto make_rhs = [&](const Vec& u) {
    return [&, u](double t, const Vec& v) {
      Vec x = process.state(t);
      Mat J = problem.phi_x(t, x, u);
      Mat Y = unflat(v, n, 0);
      Mat Z = unflat(v, n, nn);
      Vec out(2 * nn + n);
      flat_into(J * Y, out, 0);
      flat_into(-J.transpose() * Z, out, nn);
      Vec g = Y.transpose() * (problem.omega(t) * problem.f_x(t, x, u));
      for (int i = 0; i < n; ++i) out[2 * nn + i] = g[i];
      return out;
    };
  };

  std::vector<Mat> Zk(nodes.size());
  std::vector<Vec> Ck(nodes.size());
  Zk[0] = Mat::Identity(n, n);
  Ck[0] = Vec::Zero(n);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    Vec u = process.segment_control(nodes[k], nodes[k + 1]);
    aug = integrate_to(make_rhs(u), aug, nodes[k], nodes[k + 1], opts.ode);
    Zk[k + 1] = unflat(aug, n, nn);
    Ck[k + 1] = aug.tail(n);
  }

  // march past the grid until the integral settles, then close the remaining
  // tail by a geometric estimate from the last two increments
  Vec C = aug.tail(n);
  double t = nodes.back();
  double step_prev = -1.0, step_curr = -1.0;
  Vec last_inc = Vec::Zero(n);
  int calm = 0;
  while (t < opts.t_cap) {
    Vec u = process.segment_control(t, t + opts.tail_step);
    aug = integrate_to(make_rhs(u), aug, t, t + opts.tail_step, opts.ode);
    t += opts.tail_step;
    last_inc = aug.tail(n) - C;
    C = aug.tail(n);
    step_prev = step_curr;
    step_curr = last_inc.norm();
    if (step_curr <= opts.tail_tol * (1.0 + C.norm())) {
      if (++calm >= 2) break;
    } else {
      calm = 0;
    }
  }
  if (t >= opts.t_cap && opts.enforce_summability &&
      step_curr > 1e3 * opts.tail_tol * (1.0 + C.norm()))
    throw Error(ErrorCode::non_summable_system,
                "representation integral shows no decay up to t = " + std::to_string(t));
  Vec C_inf = C;
  if (step_prev > 0.0 && step_curr > 0.0) {
    double r = step_curr / step_prev;
    if (r < 1.0) C_inf += last_inc * (r / (1.0 - r));
  }

  AdjointSolution adj;
  std::vector<Vec> pv(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) pv[k] = -Zk[k] * (C_inf - Ck[k]);
  adj.p_limit = Vec::Zero(n);
  adj.p = ConvergentFunction(nodes, std::move(pv), adj.p_limit);
  adj.lambda0 = 1.0;
  adj.measures.assign(problem.constraints.size(), BorelMeasureExt{});

  const int s0 = problem.s0();
  if (s0 > 0) {
    Mat H0t = problem.h0_x(process.state(0.0)).transpose();  // n x s0
    Vec p0 = adj.p.values().front();
    adj.l0 = H0t.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(p0);
    adj.l0_fit_residual = (H0t * adj.l0 - p0).norm();
  }
  return adj;
}

AdjointResidualReport adjoint_residual(const AdjointSolution& adj, const ControlProblem& problem,
                                       const Process& process, const SemiInfiniteGrid& grid) {
  const int n = problem.state_dim;
  AdjointResidualReport rep;

  for (const auto& m : adj.measures)
    for (const auto& [s, b] : m.atoms)
      if (!grid.has_node(s))
        throw Error(ErrorCode::grid_mismatch,
                    "measure atom at t = " + std::to_string(s) + " is not a grid node");
  for (const auto& [s, d] : adj.jumps)
    if (!grid.has_node(s))
      throw Error(ErrorCode::grid_mismatch,
                  "adjoint jump at t = " + std::to_string(s) + " is not a grid node");

  auto rhs = [&](double t, const Vec& pval, const Vec& u) {
    Vec x = process.state(t);
    Vec r = adj.lambda0 * problem.omega(t) * problem.f_x(t, x, u) -
            problem.phi_x(t, x, u).transpose() * pval;
    for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
      double lam = j < adj.measures.size() ? adj.measures[j].density_at(t) : 0.0;
      if (lam != 0.0) r += lam * problem.constraints[j].g_x(t, x);
    }
    return r;
  };

  const auto& nodes = grid.nodes();
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double a = nodes[k], b = nodes[k + 1], dt = b - a;
    Vec useg = process.segment_control(a, b);
    auto u_of = [&](double t) {
      return process.piecewise_constant_control ? useg : process.control(t);
    };
    double local = 0.0;
    double local_t = a;
    if (adj.p_exact) {
      const int m = 7;
      for (int i = 0; i < m; ++i) {
        double t = a + dt * (i + 0.5) / m;
        double h = std::min(1e-4 * (1.0 + std::abs(t)), 0.12 * dt / m);
        // 5-point central difference
        Vec dp = (8.0 * (adj.p_exact(t + h) - adj.p_exact(t - h)) -
                  (adj.p_exact(t + 2 * h) - adj.p_exact(t - 2 * h))) /
                 (12.0 * h);
        double res = (dp - rhs(t, adj.p_exact(t), u_of(t))).lpNorm<Eigen::Infinity>();
        if (res > local) {
          local = res;
          local_t = t;
        }
      }
    } else {
      Vec pa = adj.p.values()[k] + adj.jump_delta(a);
      Vec pb = adj.p.values()[k + 1];
      Vec fa = rhs(a + 1e-12 * (1 + std::abs(a)), pa, u_of(a + 0.25 * dt));
      Vec fb = rhs(b - 1e-12 * (1 + std::abs(b)), pb, u_of(b - 0.25 * dt));
      double tm = 0.5 * (a + b);
      Vec pm = 0.5 * (pa + pb) + dt / 8.0 * (fa - fb);
      Vec fm = rhs(tm, pm, u_of(tm));
      Vec defect = pb - pa - dt / 6.0 * (fa + 4.0 * fm + fb);
      local = defect.lpNorm<Eigen::Infinity>() / dt;
      local_t = tm;
    }
    if (local > rep.ode_residual) {
      rep.ode_residual = local;
      rep.worst_time = local_t;
    }
    Vec pa = adj.value_right(a);
    Vec pb = adj.value(b);
    rep.bounded_variation += (pb - pa).norm();
  }
  rep.bounded_variation += adj.jump_total();

  // jump identity at every atom time, and no unexplained jumps
  std::vector<double> jump_times;
  for (const auto& m : adj.measures)
    for (const auto& [s, b] : m.atoms) jump_times.push_back(s);
  for (const auto& [s, d] : adj.jumps) jump_times.push_back(s);
  std::sort(jump_times.begin(), jump_times.end());
  jump_times.erase(std::unique(jump_times.begin(), jump_times.end(),
                               [](double x, double y) { return near(x, y); }),
                   jump_times.end());
  for (double s : jump_times) {
    Vec expected = Vec::Zero(n);
    for (std::size_t j = 0; j < adj.measures.size() && j < problem.constraints.size(); ++j)
      for (const auto& [st, beta] : adj.measures[j].atoms)
        if (near(st, s)) expected += beta * problem.constraints[j].g_x(s, process.state(s));
    double mis = (adj.jump_delta(s) - expected).norm();
    rep.jump_residual = std::max(rep.jump_residual, mis);
  }
  return rep;
}

TransversalityReport transversality_check(const AdjointSolution& adj, const ControlProblem& problem,
                                          const Process& process, EndpointKind kind,
                                          const SemiInfiniteGrid& grid) {
  if (kind != problem.endpoint_kind)
    throw Error(ErrorCode::invalid_input, "endpoint kind does not match the problem");
  const int n = problem.state_dim;
  TransversalityReport rep;

  const int s0 = problem.s0();
  if (s0 > 0) {
    if (adj.l0.size() != s0)
      throw Error(ErrorCode::invalid_input, "l0 has wrong size for this problem");
    Vec p0 = adj.value(grid.nodes().front());
    rep.initial_residual =
        (p0 - problem.h0_x(process.state(0.0)).transpose() * adj.l0).norm();
  }

  Vec p_lim = adj.p_limit.size() ? adj.p_limit : adj.p.limit();
  double t_probe = std::max(grid.last(), grid.map().t_of_s(1.0 - 1e-9));
  Vec x_lim = process.x.limit();
  Vec target = Vec::Zero(n);
  const int s1 = problem.s1();
  if (s1 > 0) {
    if (adj.l1.size() != s1)
      throw Error(ErrorCode::invalid_input, "l1 has wrong size for this problem");
    target -= problem.h1_x(t_probe, x_lim).transpose() * adj.l1;
  }
  for (std::size_t j = 0; j < problem.constraints.size() && j < adj.measures.size(); ++j)
    target -= adj.measures[j].atom_at_infinity * problem.constraints[j].g_x(t_probe, x_lim);
  rep.limit_residual = (p_lim - target).norm();
  rep.p_limit_norm = p_lim.norm();

  double t_last = grid.last();
  Vec p_last = adj.value_right(t_last);
  rep.natural_pairing = std::abs(p_last.dot(process.state(t_last)));
  Vec u_last = process.control(t_last);
  Vec x_last = process.state(t_last);
  double H = -adj.lambda0 * problem.omega(t_last) * problem.f(t_last, x_last, u_last) +
             p_last.dot(problem.phi(t_last, x_last, u_last));
  rep.michel_value = std::abs(H);
  return rep;
}

NontrivialityReport nontriviality_check(const AdjointSolution& adj, double threshold,
                                        const HorizonMap& map) {
  NontrivialityReport rep;
  auto offer = [&](double v, const char* label) {
    if (v > rep.magnitude) {
      rep.magnitude = v;
      rep.dominant = label;
    }
  };
  offer(adj.lambda0, "lambda0");
  if (adj.l0.size()) offer(adj.l0.norm(), "l0");
  if (adj.l1.size()) offer(adj.l1.norm(), "l1");
  double mass = 0.0;
  for (const auto& m : adj.measures) mass += m.total_mass(map);
  offer(mass, "measures");
  double sup_p = adj.p_limit.size() ? adj.p_limit.norm() : 0.0;
  for (const auto& v : adj.p.values()) sup_p = std::max(sup_p, v.norm());
  offer(sup_p, "p");
  rep.nontrivial = rep.magnitude > threshold;
  return rep;
}

}  // namespace horizon
