#pragma once

#include <string>
#include <vector>

#include "horizon/adjoint.hpp"
#include "horizon/problem.hpp"
#include "horizon/report.hpp"
#include "horizon/transform.hpp"

namespace horizon {

/// Verdict JSON: {scenario, conditions: [{name, residual, tolerance, pass}],
/// flags, worst: {t, condition}}, optionally extended with a measure summary.
/// All numbers rounded to 12 significant digits so reruns diff cleanly.
std::string report_json(const VerificationReport& rep, const AdjointSolution* adj = nullptr);

/// Columns t, x_1..x_n, u_1..u_m; one row per node, final row t=inf with the
/// limit state (controls repeat the last node there).
std::string trajectory_csv(const Process& proc, const SemiInfiniteGrid& grid);

/// Columns t, p_1..p_n with a final t=inf row carrying the limit.
std::string adjoint_csv(const AdjointSolution& adj, const SemiInfiniteGrid& grid);

/// Rows s_n, j, beta_jn over every measure atom.
std::string jump_table_csv(const AdjointSolution& adj);

/// Columns T, tau, J_T, J_infinite_of_T_process, J_limit_process.
std::string pathology_csv(const PathologyTable& table);

/// Two-column plot file: t plus the named value columns.
std::string plot_csv(const std::string& value_header, const std::vector<double>& t,
                     const std::vector<std::vector<double>>& columns);

struct TrajectoryData {
  std::vector<double> times;
  std::vector<Vec> x;
  std::vector<Vec> u;
  Vec x_limit;  // empty when the file carried no t=inf row
};

/// Parses the trajectory CSV schema; a wrong or missing column throws
/// schema-mismatch naming the offender.
TrajectoryData parse_trajectory_csv(const std::string& content, int state_dim, int control_dim);

std::string read_file(const std::string& path);

}  // namespace horizon
