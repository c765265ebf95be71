#include "horizon/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace horizon {

ControlSet ControlSet::finite(std::vector<Vec> cands) {
  ControlSet s;
  s.kind = Kind::finite;
  s.candidates = std::move(cands);
  if (s.candidates.empty()) throw Error(ErrorCode::invalid_input, "empty control candidate list");
  return s;
}

ControlSet ControlSet::box(Vec lo, Vec hi, int resolution) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw Error(ErrorCode::invalid_input, "control box bounds mismatch");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw Error(ErrorCode::invalid_input, "control box must have lo < hi");
  if (resolution < 2) throw Error(ErrorCode::invalid_input, "box resolution must be >= 2");
  ControlSet s;
  s.kind = Kind::box;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  s.resolution = resolution;
  return s;
}

ControlSet ControlSet::interval(double lo, double hi, int resolution) {
  Vec l(1), h(1);
  l[0] = lo;
  h[0] = hi;
  return box(l, h, resolution);
}

bool ControlSet::contains(const Vec& u, double tol) const {
  if (kind == Kind::finite) {
    for (const auto& c : candidates)
      if ((c - u).norm() <= tol) return true;
    return false;
  }
  if (u.size() != lo.size()) return false;
  for (int i = 0; i < u.size(); ++i)
    if (u[i] < lo[i] - tol || u[i] > hi[i] + tol) return false;
  return true;
}

double ControlSet::distance(const Vec& u) const {
  if (kind == Kind::finite) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) best = std::min(best, (c - u).lpNorm<Eigen::Infinity>());
    return best;
  }
  if (u.size() != lo.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (int i = 0; i < u.size(); ++i)
    d = std::max({d, lo[i] - u[i], u[i] - hi[i]});
  return std::max(d, 0.0);
}

std::vector<Vec> ControlSet::samples() const {
  if (kind == Kind::finite) return candidates;
  const int m = static_cast<int>(lo.size());
  std::vector<Vec> out;
  if (m == 1) {
    out.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      Vec u(1);
      u[0] = lo[0] + (hi[0] - lo[0]) * double(i) / double(resolution - 1);
      out.push_back(u);
    }
    return out;
  }
  // product grid for small m
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  const int per = std::max(2, static_cast<int>(std::round(std::pow(double(resolution), 1.0 / m))));
  for (;;) {
    Vec u(m);
    for (int i = 0; i < m; ++i) u[i] = lo[i] + (hi[i] - lo[i]) * double(idx[i]) / double(per - 1);
    out.push_back(u);
    int i = 0;
    while (i < m && ++idx[i] == per) idx[i++] = 0;
    if (i == m) break;
  }
  return out;
}

int ControlProblem::s0() const {
  if (!h0) return 0;
  Vec x0 = Vec::Zero(state_dim);
  return static_cast<int>(h0(x0).size());
}

int ControlProblem::s1() const {
  if (!h1) return 0;
  Vec x0 = Vec::Zero(state_dim);
  return static_cast<int>(h1(0.0, x0).size());
}

ConvergentFunction::ConvergentFunction(std::vector<double> times, std::vector<Vec> values, Vec limit)
    : times_(std::move(times)), values_(std::move(values)), limit_(std::move(limit)) {
  if (times_.empty() || times_.size() != values_.size())
    throw Error(ErrorCode::invalid_input, "convergent function needs matching nodes and values");
}

ConvergentFunction ConvergentFunction::sample(const SemiInfiniteGrid& grid,
                                              const std::function<Vec(double)>& fn, Vec limit) {
  std::vector<Vec> vals;
  vals.reserve(grid.size());
  for (double t : grid.nodes()) vals.push_back(fn(t));
  return ConvergentFunction(grid.nodes(), std::move(vals), std::move(limit));
}

Vec ConvergentFunction::eval(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) {
    if (t == times_.back()) return values_.back();
    return limit_;
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  double h = times_[k + 1] - times_[k];
  double w = (t - times_[k]) / h;
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double ConvergentFunction::tail_gap() const { return (values_.back() - limit_).norm(); }

NormPair clim_norms(const ConvergentFunction& x) {
  if (x.size() == 0) throw Error(ErrorCode::invalid_input, "empty grid in clim_norms");
  NormPair out;
  double sup = x.limit().norm();
  double sup0 = 0.0;
  for (const auto& v : x.values()) {
    sup = std::max(sup, v.norm());
    sup0 = std::max(sup0, (v - x.limit()).norm());
  }
  out.sup_norm = sup;
  out.split_norm = sup0 + x.limit().norm();
  return out;
}

Vec Process::control(double t) const {
  if (u_exact) return u_exact(t);
  const auto& times = x.times();
  if (t <= times.front()) return u_nodes.front();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times.begin());
  if (k > 0) --k;
  return u_nodes[std::min(k, u_nodes.size() - 1)];
}

Vec Process::segment_control(double t_left, double t_right) const {
  if (!piecewise_constant_control && u_exact) return u_exact(0.5 * (t_left + t_right));
  return control(0.5 * (t_left + t_right));
}

Process make_process(const SemiInfiniteGrid& grid, const std::function<Vec(double)>& x_fn,
                     const Vec& x_limit, const std::function<Vec(double)>& u_fn,
                     bool piecewise_constant_control) {
  Process p;
  p.x = ConvergentFunction::sample(grid, x_fn, x_limit);
  p.u_nodes.reserve(grid.size());
  for (double t : grid.nodes()) p.u_nodes.push_back(u_fn(t));
  p.x_exact = x_fn;
  p.u_exact = u_fn;
  p.piecewise_constant_control = piecewise_constant_control;
  return p;
}

namespace {

void track_worst(JacobianCheckResult& res, double num, double ana, const std::string& label) {
  double denom = 1.0 + std::abs(ana);
  double rel = std::abs(num - ana) / denom;
  if (rel > res.worst_relative) {
    res.worst_relative = rel;
    res.worst_entry = label;
  }
}

}  // namespace

JacobianCheckResult validate_jacobians(const ControlProblem& problem, const Process& reference,
                                       int points, double step, double rel_tol, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> su(0.0, 0.95);
  const auto& map = HorizonMap::log_map();
  auto controls = problem.control_set.samples();
  std::uniform_int_distribution<std::size_t> pick(0, controls.size() - 1);

  JacobianCheckResult res;
  const int n = problem.state_dim;
  for (int pt = 0; pt < points; ++pt) {
    double t = map.t_of_s(su(rng));
    Vec x = reference.state(t);
    for (int i = 0; i < n; ++i) x[i] += 0.3 * problem.gamma * unit(rng);
    Vec u = controls[pick(rng)];

    for (int i = 0; i < n; ++i) {
      Vec xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      double dfdx = (problem.f(t, xp, u) - problem.f(t, xm, u)) / (2 * step);
      track_worst(res, dfdx, problem.f_x(t, x, u)[i], "f_x[" + std::to_string(i) + "]");

      Vec dphidx = (problem.phi(t, xp, u) - problem.phi(t, xm, u)) / (2 * step);
      Mat J = problem.phi_x(t, x, u);
      for (int r = 0; r < n; ++r)
        track_worst(res, dphidx[r], J(r, i),
                    "phi_x[" + std::to_string(r) + "," + std::to_string(i) + "]");

      for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
        const auto& c = problem.constraints[j];
        double dg = (c.g(t, xp) - c.g(t, xm)) / (2 * step);
        track_worst(res, dg, c.g_x(t, x)[i], "g" + std::to_string(j) + "_x[" + std::to_string(i) + "]");
      }
      if (problem.h0) {
        Vec dh = (problem.h0(xp) - problem.h0(xm)) / (2 * step);
        Mat H = problem.h0_x(x);
        for (int r = 0; r < H.rows(); ++r)
          track_worst(res, dh[r], H(r, i), "h0_x[" + std::to_string(r) + "," + std::to_string(i) + "]");
      }
      if (problem.h1) {
        Vec dh = (problem.h1(t, xp) - problem.h1(t, xm)) / (2 * step);
        Mat H = problem.h1_x(t, x);
        for (int r = 0; r < H.rows(); ++r)
          track_worst(res, dh[r], H(r, i), "h1_x[" + std::to_string(r) + "," + std::to_string(i) + "]");
      }
    }
  }
  res.pass = res.worst_relative <= rel_tol;
  return res;
}

}  // namespace horizon
