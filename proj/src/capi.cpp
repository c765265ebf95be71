#include "horizon/horizon_c.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "horizon/io.hpp"
#include "horizon/pmp.hpp"
#include "horizon/report.hpp"
#include "horizon/scenarios.hpp"
#include "horizon/transform.hpp"

struct hrz_result {
  std::string json;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> files;  // (name, content)
};

namespace {

thread_local std::string g_last_error;

int code_of(horizon::ErrorCode c) {
  using EC = horizon::ErrorCode;
  switch (c) {
    case EC::invalid_input: return HRZ_INVALID_INPUT;
    case EC::unsupported_input: return HRZ_UNSUPPORTED_INPUT;
    case EC::non_summable_system: return HRZ_NON_SUMMABLE_SYSTEM;
    case EC::no_convergence: return HRZ_NO_CONVERGENCE;
    case EC::stiffness: return HRZ_STIFFNESS;
    case EC::grid_mismatch: return HRZ_GRID_MISMATCH;
    case EC::radius_exceeded: return HRZ_RADIUS_EXCEEDED;
    case EC::incomplete_verification: return HRZ_INCOMPLETE_VERIFICATION;
    case EC::not_found: return HRZ_NOT_FOUND;
    case EC::horizon_too_short: return HRZ_HORIZON_TOO_SHORT;
    case EC::resource_too_large: return HRZ_RESOURCE_TOO_LARGE;
    case EC::schema_mismatch: return HRZ_SCHEMA_MISMATCH;
    case EC::io_failure: return HRZ_IO_FAILURE;
  }
  return HRZ_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const horizon::Error& e) {
    g_last_error = std::string(horizon::error_code_name(e.code())) + ": " + e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HRZ_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HRZ_INTERNAL;
  }
}

horizon::ScenarioRunOptions to_options(const hrz_config* cfg) {
  horizon::ScenarioRunOptions opts;
  if (cfg) {
    if (cfg->grid_size > 0) opts.N = cfg->grid_size;
    if (cfg->tol_abs > 0.0) opts.tol_abs = cfg->tol_abs;
    if (cfg->tol_rel > 0.0) opts.tol_rel = cfg->tol_rel;
    if (cfg->seed != 0) opts.seed = cfg->seed;
    opts.with_sufficiency = cfg->with_sufficiency != 0;
  }
  return opts;
}

// one combined plot file: t, x_i.., u_i.., p_i.., hgap
std::string plot_data(const horizon::ScenarioArtifacts& art) {
  using horizon::Vec;
  const auto& grid = art.grid;
  auto H = horizon::pontryagin_function(art.problem);
  std::vector<double> t(grid.size());
  std::vector<std::vector<double>> cols;
  const int n = art.problem.state_dim;
  const int m = art.problem.control_dim;
  cols.resize(static_cast<std::size_t>(2 * n + m) + 1,
              std::vector<double>(grid.size(), 0.0));
  std::string header;
  for (int i = 1; i <= n; ++i) header += "x_" + std::to_string(i) + ",";
  for (int i = 1; i <= m; ++i) header += "u_" + std::to_string(i) + ",";
  for (int i = 1; i <= n; ++i) header += "p_" + std::to_string(i) + ",";
  header += "h_gap";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    t[k] = grid.node(k);
    Vec x = art.candidate.state(t[k]);
    Vec u = art.candidate.control_at_node(k);
    Vec p = art.adjoint.value_right(t[k]);
    double h_star = H(t[k], x, u, p, art.adjoint.lambda0);
    auto mx = horizon::maximize_hamiltonian(art.problem, t[k], x, p, art.adjoint.lambda0);
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) cols[c++][k] = x[i];
    for (int i = 0; i < m; ++i) cols[c++][k] = u[i];
    for (int i = 0; i < n; ++i) cols[c++][k] = p[i];
    cols[c][k] = std::max(0.0, mx.value - h_star) / (1.0 + std::abs(h_star));
  }
  return horizon::plot_csv(header, t, cols);
}

hrz_result* result_from_run(const horizon::ScenarioRun& run) {
  auto* res = new hrz_result;
  res->passed = run.pass;
  res->json = horizon::report_json(run.report, run.artifacts ? &run.artifacts->adjoint : nullptr);
  res->files.emplace_back("verdict.json", res->json);
  if (run.artifacts) {
    const auto& art = *run.artifacts;
    res->files.emplace_back("trajectory.csv",
                            horizon::trajectory_csv(art.candidate, art.grid));
    res->files.emplace_back("adjoint.csv", horizon::adjoint_csv(art.adjoint, art.grid) + "\n" +
                                               horizon::jump_table_csv(art.adjoint));
    res->files.emplace_back("plot.csv", plot_data(art));
  }
  return res;
}

}  // namespace

extern "C" {

int hrz_scenario_count(void) {
  return static_cast<int>(horizon::scenario_names().size());
}

const char* hrz_scenario_name(int index) {
  static thread_local std::string keeper;
  auto names = horizon::scenario_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  keeper = names[static_cast<std::size_t>(index)];
  return keeper.c_str();
}

int hrz_scenario_exists(const char* name) {
  return name && horizon::scenario_exists(name) ? 1 : 0;
}

int hrz_run_scenario(const char* name, const hrz_config* cfg, hrz_result** out) {
  if (!name || !out) {
    g_last_error = "null argument";
    return HRZ_INVALID_INPUT;
  }
  return guarded([&] {
    auto run = horizon::run_scenario(name, to_options(cfg));
    *out = result_from_run(run);
    return HRZ_OK;
  });
}

int hrz_verify_csv(const char* scenario_name, const char* csv_content, const hrz_config* cfg,
                   hrz_result** out) {
  if (!scenario_name || !csv_content || !out) {
    g_last_error = "null argument";
    return HRZ_INVALID_INPUT;
  }
  return guarded([&] {
    if (!horizon::scenario_exists(scenario_name))
      throw horizon::Error(horizon::ErrorCode::not_found,
                           std::string("unknown scenario: ") + scenario_name);
    auto art = horizon::build_scenario(scenario_name, 0);
    auto data = horizon::parse_trajectory_csv(csv_content, art.problem.state_dim,
                                              art.problem.control_dim);
    auto run = horizon::verify_process(scenario_name, data.times, data.x, data.u, data.x_limit,
                                       to_options(cfg));
    *out = result_from_run(run);
    return HRZ_OK;
  });
}

int hrz_pathology(double rho, double x0, const double* T_list, int T_count, hrz_result** out) {
  if (!out || (!T_list && T_count > 0)) {
    g_last_error = "null argument";
    return HRZ_INVALID_INPUT;
  }
  return guarded([&] {
    std::vector<double> Ts(T_list, T_list + std::max(0, T_count));
    if (Ts.empty()) Ts = {5.0, 10.0, 20.0, 40.0};
    auto table = horizon::pathology_demo(rho, x0, Ts);
    auto* res = new hrz_result;
    res->passed = table.limit_is_suboptimal;
    nlohmann::json j;
    j["rho"] = horizon::round_sig(table.rho);
    j["x0"] = horizon::round_sig(table.x0);
    j["tau_offset"] = horizon::round_sig(table.tau_offset);
    j["limit_is_suboptimal"] = table.limit_is_suboptimal;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : table.rows)
      j["rows"].push_back({{"T", horizon::round_sig(r.T)},
                           {"tau", horizon::round_sig(r.tau)},
                           {"J_T", horizon::round_sig(r.J_T)},
                           {"J_infinite_of_T_process", horizon::round_sig(r.J_infinite_of_T)},
                           {"J_limit_process", horizon::round_sig(r.J_limit_process)}});
    res->json = j.dump(2) + "\n";
    res->files.emplace_back("pathology.json", res->json);
    res->files.emplace_back("pathology.csv", horizon::pathology_csv(table));
    *out = res;
    return HRZ_OK;
  });
}

int hrz_result_passed(const hrz_result* res) {
  if (!res) return -1;
  return res->passed ? 1 : 0;
}

const char* hrz_result_json(const hrz_result* res) { return res ? res->json.c_str() : nullptr; }

int hrz_result_file_count(const hrz_result* res) {
  return res ? static_cast<int>(res->files.size()) : -1;
}

const char* hrz_result_file_name(const hrz_result* res, int index) {
  if (!res || index < 0 || index >= static_cast<int>(res->files.size())) return nullptr;
  return res->files[static_cast<std::size_t>(index)].first.c_str();
}

int hrz_result_write_outputs(const hrz_result* res, const char* out_dir) {
  if (!res || !out_dir) {
    g_last_error = "null argument";
    return HRZ_INVALID_INPUT;
  }
  return guarded([&] {
    std::string dir(out_dir);
    if (!dir.empty() && dir.back() != '/') dir += '/';
    for (const auto& [name, content] : res->files) horizon::atomic_write(dir + name, content);
    return HRZ_OK;
  });
}

void hrz_result_free(hrz_result* res) { delete res; }

const char* hrz_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
