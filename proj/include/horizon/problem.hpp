#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "horizon/grid.hpp"

namespace horizon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Control region U: either an explicit candidate list or a box sampled on a
/// per-coordinate grid (with local refinement done by the callers).
struct ControlSet {
  enum class Kind { finite, box };
  Kind kind = Kind::finite;
  std::vector<Vec> candidates;  // finite
  Vec lo, hi;                   // box
  int resolution = 101;         // samples per coordinate

  static ControlSet finite(std::vector<Vec> cands);
  static ControlSet box(Vec lo, Vec hi, int resolution);
  static ControlSet interval(double lo, double hi, int resolution);

  bool contains(const Vec& u, double tol = 1e-9) const;
  /// Distance from u to the set (0 inside); sup-norm for boxes, nearest
  /// candidate for finite sets.
  double distance(const Vec& u) const;
  std::vector<Vec> samples() const;
};

enum class EndpointKind { free_endpoint, fixed_endpoint, mixed_endpoint };

/// One state constraint g_j(t,x) <= 0 with its gradient in x.
struct StateConstraint {
  std::function<double(double, const Vec&)> g;
  std::function<Vec(double, const Vec&)> g_x;
};

/// The full problem datum of the infinite-horizon control problem
///   minimize  int_0^inf omega(t) f(t,x,u) dt
///   s.t.      x' = phi(t,x,u),  h0(x(0)) = 0,  lim h1(t,x(t)) = 0,
///             u in U,  g_j(t,x) <= 0.
struct ControlProblem {
  int state_dim = 0;
  int control_dim = 0;

  std::function<double(double, const Vec&, const Vec&)> f;
  std::function<Vec(double, const Vec&, const Vec&)> f_x;
  std::function<Vec(double, const Vec&, const Vec&)> phi;
  std::function<Mat(double, const Vec&, const Vec&)> phi_x;

  std::function<double(double)> omega;
  double omega_l1 = 1.0;  // declared L1 norm of omega, must be > 0

  std::function<Vec(const Vec&)> h0;       // may be null (s0 = 0)
  std::function<Mat(const Vec&)> h0_x;     // s0 x n
  std::function<Vec(double, const Vec&)> h1;    // may be null (s1 = 0)
  std::function<Mat(double, const Vec&)> h1_x;  // s1 x n

  std::vector<StateConstraint> constraints;

  ControlSet control_set;
  EndpointKind endpoint_kind = EndpointKind::free_endpoint;
  int mixed_split = 0;   // first mixed_split components free, rest fixed
  double gamma = 0.5;    // radius of the strong-local neighbourhood V_gamma

  int s0() const;
  int s1() const;
  int num_constraints() const { return static_cast<int>(constraints.size()); }
};

/// Sampled function on a grid with a recorded value at infinity.  Linear
/// interpolation between nodes, constant == limit beyond the last node.
class ConvergentFunction {
 public:
  ConvergentFunction() = default;
  ConvergentFunction(std::vector<double> times, std::vector<Vec> values, Vec limit);

  static ConvergentFunction sample(const SemiInfiniteGrid& grid,
                                   const std::function<Vec(double)>& fn, Vec limit);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& values() const { return values_; }
  const Vec& limit() const { return limit_; }
  int dim() const { return limit_.size(); }
  std::size_t size() const { return times_.size(); }

  Vec eval(double t) const;
  double tail_gap() const;  // ||values.back() - limit||

 private:
  std::vector<double> times_;
  std::vector<Vec> values_;
  Vec limit_;
};

struct NormPair {
  double sup_norm = 0.0;    // sup_t ||x(t)||, including the limit
  double split_norm = 0.0;  // sup_t ||x(t) - a|| + ||a||
};

/// The two equivalent norms on functions converging at infinity.
NormPair clim_norms(const ConvergentFunction& x);

/// Candidate trajectory/control pair.  The control is piecewise constant on
/// the grid: u(t) = u_nodes[k] on [t_k, t_{k+1}), frozen at the last value
/// beyond the grid.  Scenario candidates may also carry exact callables used
/// by quadrature-based checks.
struct Process {
  ConvergentFunction x;
  std::vector<Vec> u_nodes;
  std::function<Vec(double)> x_exact;  // optional closed form
  std::function<Vec(double)> u_exact;  // optional closed form
  bool piecewise_constant_control = true;
  std::map<std::string, bool> flags;   // admissibility flags, filled by pmp

  Vec state(double t) const { return x_exact ? x_exact(t) : x.eval(t); }
  Vec control(double t) const;
  Vec control_at_node(std::size_t k) const { return u_nodes[std::min(k, u_nodes.size() - 1)]; }
  /// Control value used across [t_left, t_right]; midpoint sample when the
  /// control is piecewise constant, so segment integrators never read a value
  /// from across a switch node.
  Vec segment_control(double t_left, double t_right) const;
};

Process make_process(const SemiInfiniteGrid& grid, const std::function<Vec(double)>& x_fn,
                     const Vec& x_limit, const std::function<Vec(double)>& u_fn,
                     bool piecewise_constant_control = true);

struct JacobianCheckResult {
  double worst_relative = 0.0;
  std::string worst_entry;
  bool pass = false;
};

/// Central finite-difference consistency check of all declared Jacobians at
/// random sample points near the reference trajectory.
JacobianCheckResult validate_jacobians(const ControlProblem& problem, const Process& reference,
                                       int points = 100, double step = 1e-6,
                                       double rel_tol = 1e-5, unsigned seed = 2024);

}  // namespace horizon
