#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "horizon/horizon_c.h"

TEST_CASE("scenario registry through the c interface") {
  CHECK(hrz_scenario_count() == 8);
  CHECK(hrz_scenario_name(-1) == nullptr);
  CHECK(hrz_scenario_name(99) == nullptr);
  bool found = false;
  for (int i = 0; i < hrz_scenario_count(); ++i)
    if (std::strcmp(hrz_scenario_name(i), "lq_regulator") == 0) found = true;
  CHECK(found);
  CHECK(hrz_scenario_exists("lq_regulator") == 1);
  CHECK(hrz_scenario_exists("nonexistent") == 0);
  CHECK(hrz_scenario_exists(nullptr) == 0);
}

TEST_CASE("scenario run produces a verdict and four artifacts") {
  hrz_result* res = nullptr;
  CHECK(hrz_run_scenario("lq_regulator", nullptr, &res) == HRZ_OK);
  REQUIRE(res != nullptr);
  CHECK(hrz_result_passed(res) == 1);
  CHECK(hrz_result_file_count(res) == 4);
  std::vector<std::string> names;
  for (int i = 0; i < hrz_result_file_count(res); ++i) names.push_back(hrz_result_file_name(res, i));
  CHECK(names == std::vector<std::string>{"verdict.json", "trajectory.csv", "adjoint.csv",
                                          "plot.csv"});
  auto j = nlohmann::json::parse(hrz_result_json(res));
  CHECK(j["pass"] == true);
  CHECK(j["scenario"] == "lq_regulator");
  CHECK(j["lambda0"] == 1.0);
  hrz_result_free(res);
}

TEST_CASE("error paths return stable status codes") {
  hrz_result* res = nullptr;
  CHECK(hrz_run_scenario("nonexistent", nullptr, &res) == HRZ_NOT_FOUND);
  CHECK(std::string(hrz_last_error()).find("nonexistent") != std::string::npos);

  CHECK(hrz_run_scenario(nullptr, nullptr, &res) == HRZ_INVALID_INPUT);
  CHECK(hrz_verify_csv("lq_regulator", "not,a,schema\n1,2,3\n", nullptr, &res) ==
        HRZ_SCHEMA_MISMATCH);
  CHECK(hrz_verify_csv("nonexistent", "t,x_1,u_1\n", nullptr, &res) == HRZ_NOT_FOUND);

  hrz_config cfg{};
  cfg.grid_size = 4;  // below the minimum of 8
  CHECK(hrz_run_scenario("lq_regulator", &cfg, &res) == HRZ_INVALID_INPUT);
}

TEST_CASE("csv verification round trips through the c interface") {
  hrz_result* res = nullptr;
  REQUIRE(hrz_run_scenario("lq_regulator", nullptr, &res) == HRZ_OK);
  auto dir = std::filesystem::temp_directory_path() / "hrz_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(hrz_result_write_outputs(res, dir.c_str()) == HRZ_OK);
  hrz_result_free(res);

  std::ifstream in(dir / "trajectory.csv");
  REQUIRE(in.good());
  std::string csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  hrz_result* ver = nullptr;
  CHECK(hrz_verify_csv("lq_regulator", csv.c_str(), nullptr, &ver) == HRZ_OK);
  REQUIRE(ver != nullptr);
  CHECK(hrz_result_passed(ver) == 1);
  hrz_result_free(ver);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pathology through the c interface") {
  hrz_result* res = nullptr;
  double Ts[] = {5.0, 10.0, 20.0};
  CHECK(hrz_pathology(0.5, 1.0, Ts, 3, &res) == HRZ_OK);
  REQUIRE(res != nullptr);
  CHECK(hrz_result_passed(res) == 1);
  auto j = nlohmann::json::parse(hrz_result_json(res));
  CHECK(j["limit_is_suboptimal"] == true);
  CHECK(j["rows"].size() == 3);
  hrz_result_free(res);

  // default horizons
  CHECK(hrz_pathology(0.5, 1.0, nullptr, 0, &res) == HRZ_OK);
  auto j2 = nlohmann::json::parse(hrz_result_json(res));
  CHECK(j2["rows"].size() == 4);
  hrz_result_free(res);

  // a horizon below the switching threshold is an input error
  double bad[] = {1.0};
  CHECK(hrz_pathology(0.5, 1.0, bad, 1, &res) != HRZ_OK);
}

TEST_CASE("null handles are tolerated") {
  CHECK(hrz_result_passed(nullptr) == -1);
  CHECK(hrz_result_json(nullptr) == nullptr);
  CHECK(hrz_result_file_count(nullptr) == -1);
  CHECK(hrz_result_file_name(nullptr, 0) == nullptr);
  hrz_result_free(nullptr);
}
