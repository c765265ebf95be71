// Front end over the shared C API: run scenarios, verify imported
// trajectories, print the finite-horizon pathology table.
//
// Exit contract: 0 all checks pass, 1 a verification verdict failed,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horizon/horizon_c.h"

namespace {

struct CliOptions {
  std::string scenario;
  std::string input;
  int N = 0;
  double tol_abs = 0.0;
  double tol_rel = 0.0;
  unsigned seed = 0;
  std::string out = "out";
  std::string format = "json";
  bool sufficiency = true;
  std::string config_path = "config/scenarios.json";
};

hrz_config to_c_config(const CliOptions& o) {
  hrz_config cfg{};
  cfg.grid_size = o.N;
  cfg.tol_abs = o.tol_abs;
  cfg.tol_rel = o.tol_rel;
  cfg.seed = o.seed;
  cfg.with_sufficiency = o.sufficiency ? 1 : 0;
  return cfg;
}

// Per-scenario overrides from a JSON file keyed by scenario name; explicit
// command-line values win over the file, the file wins over defaults.
void apply_config_file(const CliOptions& o, const std::string& scenario, hrz_config& cfg) {
  std::ifstream in(o.config_path);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("config", std::string("cannot parse ") + o.config_path + ": " +
                                             e.what());
  }
  if (!j.contains(scenario)) return;
  const auto& s = j[scenario];
  if (cfg.grid_size == 0 && s.contains("N")) cfg.grid_size = s["N"].get<int>();
  if (cfg.tol_abs <= 0.0 && s.contains("tol_abs")) cfg.tol_abs = s["tol_abs"].get<double>();
  if (cfg.tol_rel <= 0.0 && s.contains("tol_rel")) cfg.tol_rel = s["tol_rel"].get<double>();
  if (cfg.seed == 0 && s.contains("seed")) cfg.seed = s["seed"].get<unsigned>();
}

std::string out_dir(const CliOptions& o) {
  if (const char* env = std::getenv("HORIZON_PMP_OUT"); env && *env) return env;
  return o.out;
}

void print_report(const std::string& json_text, const std::string& format) {
  if (format == "json") {
    std::cout << json_text;
    return;
  }
  auto j = nlohmann::json::parse(json_text);
  if (format == "csv") {
    std::cout << "name,residual,tolerance,pass\n";
    for (const auto& c : j.value("conditions", nlohmann::json::array()))
      std::cout << c["name"].get<std::string>() << "," << c["residual"].get<double>() << ","
                << c["tolerance"].get<double>() << "," << (c["pass"].get<bool>() ? 1 : 0) << "\n";
    return;
  }
  // text
  std::cout << "scenario: " << j.value("scenario", std::string("?")) << "\n";
  for (const auto& c : j.value("conditions", nlohmann::json::array()))
    std::cout << "  " << (c["pass"].get<bool>() ? "pass" : "FAIL") << "  "
              << c["name"].get<std::string>() << "  residual " << c["residual"].get<double>()
              << " (tol " << c["tolerance"].get<double>() << ")\n";
  if (j.contains("flags"))
    for (auto it = j["flags"].begin(); it != j["flags"].end(); ++it)
      std::cout << "  flag " << it.key() << " = " << (it.value().get<bool>() ? "true" : "false")
                << "\n";
  std::cout << "verdict: " << (j.value("pass", false) ? "pass" : "FAIL") << "\n";
}

int finish(int status, hrz_result* res, const CliOptions& o) {
  if (status != HRZ_OK) {
    std::cerr << "error: " << hrz_last_error() << "\n";
    return 2;
  }
  int rc = hrz_result_passed(res) == 1 ? 0 : 1;
  int wr = hrz_result_write_outputs(res, out_dir(o).c_str());
  if (wr != HRZ_OK) {
    std::cerr << "error: " << hrz_last_error() << "\n";
    hrz_result_free(res);
    return 2;
  }
  print_report(hrz_result_json(res), o.format);
  hrz_result_free(res);
  return rc;
}

std::vector<double> parse_T_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinite-horizon optimal control verification toolkit"};
  app.require_subcommand(1);

  CliOptions o;
  app.add_option("--out", o.out, "Output directory (HORIZON_PMP_OUT overrides)");
  app.add_option("--format", o.format, "Report format: json, csv, text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--N", o.N, "Grid size (>= 8)")->check(CLI::Range(8, 1 << 20));
  app.add_option("--tol-abs", o.tol_abs, "Absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-rel", o.tol_rel, "Relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--config", o.config_path, "Per-scenario config file");
  app.add_flag("--sufficiency,!--no-sufficiency", o.sufficiency,
               "Run the sufficiency bundle (default on)");

  auto* sc = app.add_subcommand("scenario", "Run a registered scenario");
  sc->add_option("--scenario,name", o.scenario, "Scenario name")->required();

  auto* vf = app.add_subcommand("verify", "Verify an imported trajectory CSV");
  vf->add_option("--scenario", o.scenario, "Problem to verify against")->required();
  vf->add_option("--input,file", o.input, "Trajectory CSV path")->required();

  double rho = 0.5, x0 = 1.0;
  std::string T_spec = "5,10,20,40";
  auto* pa = app.add_subcommand("pathology", "Finite-horizon approximation failure table");
  pa->add_option("--rho", rho, "Discount rate in (0,1)");
  pa->add_option("--x0", x0, "Initial state");
  pa->add_option("--T", T_spec, "Comma-separated horizon list");

  auto* ls = app.add_subcommand("list", "List registered scenarios");

  // shared flags may follow the subcommand
  for (auto* cmd : {sc, vf, pa, ls}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ls->parsed()) {
      for (int i = 0; i < hrz_scenario_count(); ++i) std::cout << hrz_scenario_name(i) << "\n";
      return 0;
    }

    if (sc->parsed()) {
      if (!hrz_scenario_exists(o.scenario.c_str())) {
        std::cerr << "error: unknown scenario '" << o.scenario << "'\n";
        return 2;
      }
      hrz_config cfg = to_c_config(o);
      apply_config_file(o, o.scenario, cfg);
      hrz_result* res = nullptr;
      int status = hrz_run_scenario(o.scenario.c_str(), &cfg, &res);
      return finish(status, res, o);
    }

    if (vf->parsed()) {
      if (!hrz_scenario_exists(o.scenario.c_str())) {
        std::cerr << "error: unknown scenario '" << o.scenario << "'\n";
        return 2;
      }
      std::ifstream in(o.input, std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot open " << o.input << "\n";
        return 2;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      hrz_config cfg = to_c_config(o);
      apply_config_file(o, o.scenario, cfg);
      hrz_result* res = nullptr;
      int status = hrz_verify_csv(o.scenario.c_str(), buf.str().c_str(), &cfg, &res);
      return finish(status, res, o);
    }

    // pathology
    auto Ts = parse_T_list(T_spec);
    hrz_result* res = nullptr;
    int status = hrz_pathology(rho, x0, Ts.data(), static_cast<int>(Ts.size()), &res);
    if (status != HRZ_OK) {
      std::cerr << "error: " << hrz_last_error() << "\n";
      return 2;
    }
    bool confirmed = hrz_result_passed(res) == 1;
    int wr = hrz_result_write_outputs(res, out_dir(o).c_str());
    if (wr != HRZ_OK) {
      std::cerr << "error: " << hrz_last_error() << "\n";
      hrz_result_free(res);
      return 2;
    }
    print_report(hrz_result_json(res), "json");
    hrz_result_free(res);
    if (confirmed) std::cout << "finite-horizon limit is NOT infinite-horizon optimal\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
