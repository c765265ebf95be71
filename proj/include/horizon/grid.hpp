#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "horizon/errors.hpp"

namespace horizon {

/// Monotone change of variable s in [0,1) -> t in [0,inf) compactifying the
/// half line.  speed(s) = dt/ds stays positive on [0,1).
struct HorizonMap {
  std::string name;
  std::function<double(double)> t_of_s;
  std::function<double(double)> s_of_t;
  std::function<double(double)> speed;
  // same quantities parametrized by the distance u = 1 - s to the right end;
  // evaluating through u avoids the cancellation in 1 - s near s = 1
  std::function<double(double)> t_of_u;
  std::function<double(double)> u_of_t;
  std::function<double(double)> speed_of_u;

  static HorizonMap log_map();       // t = -ln(1-s)
  static HorizonMap rational_map();  // t = s/(1-s)
  static HorizonMap named(const std::string& name);
};

/// Finite node set t_0 = 0 < t_1 < ... < t_{N-1} together with the generating
/// map and a marker for the ideal point t = infinity.
class SemiInfiniteGrid {
 public:
  SemiInfiniteGrid(std::vector<double> nodes, HorizonMap map, bool includes_infinity = true);

  const std::vector<double>& nodes() const { return nodes_; }
  const HorizonMap& map() const { return map_; }
  bool includes_infinity() const { return includes_infinity_; }
  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t k) const { return nodes_[k]; }
  double last() const { return nodes_.back(); }

  /// Index of the node equal to t (within 1e-12), or throws grid-mismatch.
  std::size_t index_of(double t) const;
  bool has_node(double t) const;

  /// New grid with the given times merged into the node set.
  SemiInfiniteGrid with_breakpoints(const std::vector<double>& extra) const;

 private:
  std::vector<double> nodes_;
  HorizonMap map_;
  bool includes_infinity_;
};

/// Uniform s-grid of N nodes pushed through the map; N >= 8 required.
SemiInfiniteGrid make_grid(const HorizonMap& map, int N);

}  // namespace horizon
