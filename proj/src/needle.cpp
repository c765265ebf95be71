#include "horizon/needle.hpp"

#include <algorithm>
#include <cmath>

#include "horizon/ode.hpp"
#include "horizon/quadrature.hpp"

namespace horizon {

namespace {

double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace

IntervalSet::IntervalSet(std::vector<RatInterval> parts) {
  for (auto& p : parts)
    if (p.lo > p.hi) throw Error(ErrorCode::invalid_input, "interval with lo > hi");
  std::sort(parts.begin(), parts.end(),
            [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
  for (auto& p : parts) {
    if (p.lo == p.hi) continue;  // measure-zero pieces are dropped
    if (!parts_.empty() && p.lo <= parts_.back().hi)
      parts_.back().hi = std::max(parts_.back().hi, p.hi);
    else
      parts_.push_back(p);
  }
}

IntervalSet IntervalSet::interval(const Rat& lo, const Rat& hi) {
  return IntervalSet({RatInterval{lo, hi}});
}

Rat IntervalSet::measure() const {
  Rat m = 0;
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool IntervalSet::contains(const Rat& t) const {
  for (const auto& p : parts_)
    if (t >= p.lo && t <= p.hi) return true;
  return false;
}

bool IntervalSet::contains_set(const IntervalSet& other) const {
  return other.intersect(*this).measure() == other.measure();
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<RatInterval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<RatInterval> out;
  for (const auto& a : parts_)
    for (const auto& b : other.parts_) {
      Rat lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  return IntervalSet(std::move(out));
}

bool IntervalSet::disjoint_with(const IntervalSet& other) const {
  return intersect(other).measure() == 0;
}

IntervalSet IntervalSet::measure_slice(const Rat& a, const Rat& b) const {
  if (a < 0 || b > 1 || a > b) throw Error(ErrorCode::invalid_input, "slice fractions out of order");
  const Rat total = measure();
  const Rat A = a * total, B = b * total;
  std::vector<RatInterval> out;
  Rat acc = 0;
  for (const auto& p : parts_) {
    Rat next = acc + p.length();
    Rat lo = std::max(A, acc), hi = std::min(B, next);
    if (lo < hi) out.push_back({p.lo + (lo - acc), p.lo + (hi - acc)});
    acc = next;
  }
  return IntervalSet(std::move(out));
}

std::vector<Rat> IntervalSet::endpoints() const {
  std::vector<Rat> out;
  for (const auto& p : parts_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  return out;
}

IntervalSet StepFunction::support() const {
  std::vector<RatInterval> parts;
  for (const auto& p : pieces) parts.push_back({p.lo, p.hi});
  return IntervalSet(std::move(parts));
}

double StepFunction::max_norm() const {
  double m = 0.0;
  for (const auto& p : pieces) m = std::max(m, p.value.lpNorm<Eigen::Infinity>());
  return m;
}

Vec StepFunction::eval(const Rat& t) const {
  for (const auto& p : pieces)
    if (t >= p.lo && t < p.hi) return p.value;
  if (!pieces.empty() && t == pieces.back().hi) return pieces.back().value;
  return pieces.empty() ? Vec() : Vec::Zero(pieces.front().value.size());
}

IntervalSet NeedleFamily::variation_set(int i, const Rat& alpha) const {
  if (i < 1 || i > d) throw Error(ErrorCode::invalid_input, "direction index out of range");
  if (alpha < 0 || alpha > Delta)
    throw Error(ErrorCode::invalid_input, "alpha outside [0, 1/d]");
  Rat start = Rat(i - 1) / d;
  IntervalSet out;
  for (const auto& cell : cells) out = out.unite(cell.measure_slice(start, start + alpha));
  return out;
}

NeedleFamily build_variation_sets(const StepFunction& y, double delta,
                                  const std::vector<Rat>& alphas, int d) {
  if (y.pieces.empty()) throw Error(ErrorCode::unsupported_input, "step function has no pieces");
  for (std::size_t k = 0; k + 1 < y.pieces.size(); ++k)
    if (y.pieces[k].hi > y.pieces[k + 1].lo)
      throw Error(ErrorCode::unsupported_input, "step-function pieces overlap");
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_input, "delta must be positive");
  if (d < 1) throw Error(ErrorCode::invalid_input, "need at least one direction");

  NeedleFamily fam;
  fam.K = y.support();
  fam.d = d;
  fam.Delta = Rat(1) / d;
  fam.delta = delta;
  fam.alphas = alphas;
  for (const auto& a : alphas)
    if (a < 0 || a > fam.Delta) throw Error(ErrorCode::invalid_input, "alpha outside [0, 1/d]");

  const Rat total = fam.K.measure();
  const double C = y.max_norm();
  // equal-measure cells no longer than delta / (2C)
  long r = 1;
  if (C > 0.0) {
    Rat bound = total * Rat(2.0) * Rat(C) / Rat(delta);
    r = static_cast<long>(bound.convert_to<double>()) + 1;
  }
  for (long j = 0; j < r; ++j)
    fam.cells.push_back(fam.K.measure_slice(Rat(j) / r, Rat(j + 1) / r));
  return fam;
}

namespace {

// int_{[0,t] cap S} y, exact measures times piece values
Vec cumulative_over(const IntervalSet& S, const StepFunction& y, const Rat& t) {
  Vec out = Vec::Zero(y.pieces.front().value.size());
  for (const auto& p : y.pieces) {
    Rat hi = std::min(p.hi, t);
    if (hi <= p.lo) continue;
    Rat m = S.intersect(IntervalSet::interval(p.lo, hi)).measure();
    if (m != 0) out += to_double(m) * p.value;
  }
  return out;
}

}  // namespace

double needle_sup_bound_gap(const NeedleFamily& family, const StepFunction& y, int i,
                            const Rat& alpha, const Rat& alpha_prime) {
  IntervalSet Ma = family.variation_set(i, alpha);
  IntervalSet Mb = family.variation_set(i, alpha_prime);
  double scale = to_double(alpha - alpha_prime);

  std::vector<Rat> breaks;
  auto push = [&](const std::vector<Rat>& v) { breaks.insert(breaks.end(), v.begin(), v.end()); };
  push(Ma.endpoints());
  push(Mb.endpoints());
  push(family.K.endpoints());
  for (const auto& p : y.pieces) {
    breaks.push_back(p.lo);
    breaks.push_back(p.hi);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double gap = 0.0;
  for (const auto& t : breaks) {
    Vec F = cumulative_over(Ma, y, t) - cumulative_over(Mb, y, t) -
            scale * cumulative_over(family.K, y, t);
    gap = std::max(gap, F.lpNorm<Eigen::Infinity>());
  }
  return gap;
}

std::function<Vec(double)> needle_control(const std::function<Vec(double)>& u_star,
                                          const std::vector<std::function<Vec(double)>>& directions,
                                          const NeedleFamily& family,
                                          const std::vector<Rat>& alpha) {
  if (directions.size() != alpha.size() || static_cast<int>(directions.size()) != family.d)
    throw Error(ErrorCode::invalid_input, "directions and alpha must both have d entries");
  std::vector<IntervalSet> sets;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    sets.push_back(family.variation_set(static_cast<int>(i) + 1, alpha[i]));
  return [u_star, directions, sets](double t) {
    Rat rt(t);
    Vec u = u_star(t);
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i].contains(rt)) u += directions[i](t) - u;  // equals directions[i](t) inside
    return u;
  };
}

VariationGapReport variation_gap_check(const ControlProblem& problem, const Process& process,
                                       const NeedleFamily& family,
                                       const std::vector<std::function<Vec(double)>>& directions,
                                       const std::vector<Rat>& alpha,
                                       const std::vector<Rat>& alpha_prime,
                                       const SemiInfiniteGrid& grid,
                                       const VariationGapOptions& opts) {
  const std::size_t d = directions.size();
  if (alpha.size() != d || alpha_prime.size() != d || static_cast<int>(d) != family.d)
    throw Error(ErrorCode::invalid_input, "dimension mismatch in variation data");

  auto u_star = [&process](double t) { return process.control(t); };
  auto ua = needle_control(u_star, directions, family, alpha);
  auto ub = needle_control(u_star, directions, family, alpha_prime);

  std::vector<double> bp;
  auto push_set = [&](const IntervalSet& s) {
    for (const auto& e : s.endpoints()) bp.push_back(to_double(e));
  };
  for (std::size_t i = 0; i < d; ++i) {
    push_set(family.variation_set(static_cast<int>(i) + 1, alpha[i]));
    push_set(family.variation_set(static_cast<int>(i) + 1, alpha_prime[i]));
  }
  push_set(family.K);
  double k_end = bp.empty() ? 0.0 : *std::max_element(bp.begin(), bp.end());
  SemiInfiniteGrid fine = grid.with_breakpoints(bp);

  // perturbed trajectory and radius control
  VariationGapReport rep;
  Vec x = process.state(0.0);
  const int n = problem.state_dim;
  std::vector<Vec> xa(fine.size());
  xa[0] = x;
  for (std::size_t k = 0; k + 1 < fine.size(); ++k) {
    double a = fine.node(k), b = fine.node(k + 1);
    Vec u = ua(0.5 * (a + b));
    x = integrate_to([&](double t, const Vec& v) { return problem.phi(t, v, u); }, x, a, b);
    xa[k + 1] = x;
    double dev = (x - process.state(b)).norm();
    rep.sup_state_deviation = std::max(rep.sup_state_deviation, dev);
  }
  if (opts.enforce_radius && rep.sup_state_deviation > problem.gamma)
    throw Error(ErrorCode::radius_exceeded, "needle trajectory left the gamma tube");

  // cumulative mismatch of the dynamics and cost integrals against their
  // first-order (alpha-weighted) counterparts
  Rat k_end_rat(k_end);
  auto chi_K = [&](double t) { return family.K.contains(Rat(t)) ? 1.0 : 0.0; };
  double sum_dalpha = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    sum_dalpha += std::abs(to_double(alpha[i] - alpha_prime[i]));

  Vec G1 = Vec::Zero(n);
  double G2 = 0.0;
  for (std::size_t k = 0; k + 1 < fine.size() && fine.node(k) < k_end + 1e-15; ++k) {
    double a = fine.node(k), b = std::min(fine.node(k + 1), k_end);
    if (b <= a) break;
    double mid = 0.5 * (a + b);
    Vec u_a = ua(mid), u_b = ub(mid), u_s = u_star(mid);
    for (int c = 0; c < n; ++c)
      G1[c] += integrate(
          [&](double t) {
            Vec xs = process.state(t);
            double v = problem.phi(t, xs, u_a)[c] - problem.phi(t, xs, u_b)[c];
            for (std::size_t i = 0; i < d; ++i)
              v -= to_double(alpha[i] - alpha_prime[i]) * chi_K(mid) *
                   (problem.phi(t, xs, directions[i](t))[c] - problem.phi(t, xs, u_s)[c]);
            return v;
          },
          a, b, opts.quad_tol);
    G2 += integrate(
        [&](double t) {
          Vec xs = process.state(t);
          double v = problem.omega(t) * (problem.f(t, xs, u_a) - problem.f(t, xs, u_b));
          for (std::size_t i = 0; i < d; ++i)
            v -= to_double(alpha[i] - alpha_prime[i]) * chi_K(mid) * problem.omega(t) *
                 (problem.f(t, xs, directions[i](t)) - problem.f(t, xs, u_s));
          return v;
        },
        a, b, opts.quad_tol);
    rep.trajectory_gap = std::max(rep.trajectory_gap, G1.lpNorm<Eigen::Infinity>());
    rep.cost_gap = std::max(rep.cost_gap, std::abs(G2));
  }
  if (sum_dalpha > 0.0) {
    rep.empirical_constant_trajectory = rep.trajectory_gap / sum_dalpha;
    rep.empirical_constant_cost = rep.cost_gap / sum_dalpha;
  }
  return rep;
}

}  // namespace horizon
