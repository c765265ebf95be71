#include "horizon/grid.hpp"

#include <algorithm>

namespace horizon {

HorizonMap HorizonMap::log_map() {
  HorizonMap m;
  m.name = "log";
  m.t_of_s = [](double s) { return -std::log1p(-s); };
  m.s_of_t = [](double t) { return -std::expm1(-t); };
  m.speed = [](double s) { return 1.0 / (1.0 - s); };
  m.t_of_u = [](double u) { return -std::log(u); };
  m.u_of_t = [](double t) { return std::exp(-t); };
  m.speed_of_u = [](double u) { return 1.0 / u; };
  return m;
}

HorizonMap HorizonMap::rational_map() {
  HorizonMap m;
  m.name = "rational";
  m.t_of_s = [](double s) { return s / (1.0 - s); };
  m.s_of_t = [](double t) { return t / (1.0 + t); };
  m.speed = [](double s) { return 1.0 / ((1.0 - s) * (1.0 - s)); };
  m.t_of_u = [](double u) { return (1.0 - u) / u; };
  m.u_of_t = [](double t) { return 1.0 / (1.0 + t); };
  m.speed_of_u = [](double u) { return 1.0 / (u * u); };
  return m;
}

HorizonMap HorizonMap::named(const std::string& name) {
  if (name == "log") return log_map();
  if (name == "rational") return rational_map();
  throw Error(ErrorCode::invalid_input, "unknown horizon map: " + name);
}

SemiInfiniteGrid::SemiInfiniteGrid(std::vector<double> nodes, HorizonMap map, bool includes_infinity)
    : nodes_(std::move(nodes)), map_(std::move(map)), includes_infinity_(includes_infinity) {
  if (nodes_.empty()) throw Error(ErrorCode::invalid_input, "empty grid");
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > nodes_[k - 1]))
      throw Error(ErrorCode::invalid_input, "grid nodes must be strictly increasing");
  }
}

std::size_t SemiInfiniteGrid::index_of(double t) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - 1e-12);
  if (it == nodes_.end() || std::abs(*it - t) > 1e-12)
    throw Error(ErrorCode::grid_mismatch, "time is not a grid node: " + std::to_string(t));
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool SemiInfiniteGrid::has_node(double t) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - 1e-12);
  return it != nodes_.end() && std::abs(*it - t) <= 1e-12;
}

SemiInfiniteGrid SemiInfiniteGrid::with_breakpoints(const std::vector<double>& extra) const {
  std::vector<double> merged = nodes_;
  for (double t : extra) {
    if (t < 0.0 || !std::isfinite(t)) continue;
    merged.push_back(t);
  }
  std::sort(merged.begin(), merged.end());
  std::vector<double> dedup;
  for (double t : merged) {
    if (dedup.empty() || t - dedup.back() > 1e-12) dedup.push_back(t);
  }
  return SemiInfiniteGrid(std::move(dedup), map_, includes_infinity_);
}

SemiInfiniteGrid make_grid(const HorizonMap& map, int N) {
  if (N < 8) throw Error(ErrorCode::invalid_input, "grid needs at least 8 nodes");
  std::vector<double> nodes(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) nodes[static_cast<std::size_t>(k)] = map.t_of_s(double(k) / double(N));
  nodes[0] = 0.0;
  return SemiInfiniteGrid(std::move(nodes), map, true);
}

}  // namespace horizon
