#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "battsched/battsched.h"

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"({
  "master_seed": 11,
  "scoring": {"months": 1, "include_grid": true},
  "policy": {"horizon": 8, "v_f": 2, "v_o": 2, "beta": 0.1},
  "env": {"synthetic": {"n_days": 30}}
})";

std::string tmp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "battsched_capi" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(std::strcmp(battsched_version(), "0.1.0") == 0);
  CHECK(battsched_last_error() != nullptr);
}

TEST_CASE("null and malformed arguments set config errors") {
  battsched_env* env = nullptr;
  CHECK(battsched_env_create(nullptr, &env) == BATTSCHED_ERR_CONFIG);
  CHECK(battsched_env_create("{not json", &env) == BATTSCHED_ERR_CONFIG);
  CHECK(std::string(battsched_last_error()).size() > 0);
  double out = 0.0;
  CHECK(battsched_bound_iid(R"({"a": 2.0})", 1, &out) == BATTSCHED_ERR_CONFIG);
}

TEST_CASE("environment, archive, policy and scoring round-trip") {
  battsched_env* env = nullptr;
  REQUIRE(battsched_env_create(kConfig, &env) == BATTSCHED_OK);
  long long hours = 0;
  int n_b = 0;
  CHECK(battsched_env_hours(env, &hours) == BATTSCHED_OK);
  CHECK(hours == 730 + 8);  // one scoring month plus the forecast tail
  CHECK(battsched_env_buildings(env, &n_b) == BATTSCHED_OK);
  CHECK(n_b == 1);

  battsched_archive* archive = nullptr;
  REQUIRE(battsched_archive_generate(env, kConfig, 2, &archive) ==
          BATTSCHED_OK);

  double mae = -1.0;
  CHECK(battsched_archive_metric(archive, env, "mae", 0, &mae) == BATTSCHED_OK);
  CHECK(mae > 0.0);
  double mae_committed = -1.0;
  CHECK(battsched_archive_metric(archive, env, "mae", 2, &mae_committed) ==
        BATTSCHED_OK);
  CHECK(mae_committed > 0.0);
  CHECK(battsched_archive_metric(archive, env, "nope", 0, &mae) ==
        BATTSCHED_ERR_CONFIG);
  // scenario metric on a point archive is a data error
  CHECK(battsched_archive_metric(archive, env, "es", 0, &mae) ==
        BATTSCHED_ERR_DATA);

  battsched_trace* trace = nullptr;
  REQUIRE(battsched_run_policy(env, archive, kConfig, 730, &trace) ==
          BATTSCHED_OK);

  char* kpi_json = nullptr;
  REQUIRE(battsched_trace_score(trace, env, 1, &kpi_json) == BATTSCHED_OK);
  REQUIRE(kpi_json != nullptr);
  CHECK(std::string(kpi_json).find("avg_score_with_grid") != std::string::npos);
  battsched_string_free(kpi_json);

  double cost = 0.0;
  CHECK(battsched_trace_realized_cost(trace, env, 0.1, 1.0, &cost) ==
        BATTSCHED_OK);
  CHECK(cost > 0.0);

  // grid scoring of a non-month trace is a data error
  battsched_trace* short_trace = nullptr;
  REQUIRE(battsched_run_policy(env, archive, kConfig, 24, &short_trace) ==
          BATTSCHED_OK);
  char* dummy = nullptr;
  CHECK(battsched_trace_score(short_trace, env, 1, &dummy) ==
        BATTSCHED_ERR_DATA);
  CHECK(battsched_trace_score(short_trace, env, 0, &dummy) == BATTSCHED_OK);
  battsched_string_free(dummy);

  const auto dir = tmp_dir("io");
  CHECK(battsched_env_write_csv(env, (dir + "/b.csv").c_str(),
                                (dir + "/d.csv").c_str()) == BATTSCHED_OK);
  CHECK(battsched_archive_write_csv(archive, (dir + "/a.csv").c_str()) ==
        BATTSCHED_OK);
  battsched_archive* back = nullptr;
  CHECK(battsched_archive_read_csv((dir + "/a.csv").c_str(), "point", &back) ==
        BATTSCHED_OK);
  CHECK(battsched_trace_write_csv(trace, (dir + "/t.csv").c_str()) ==
        BATTSCHED_OK);

  battsched_archive_free(back);
  battsched_trace_free(short_trace);
  battsched_trace_free(trace);
  battsched_archive_free(archive);
  battsched_env_free(env);
}

TEST_CASE("bound evaluators through the C API") {
  const char* params =
      R"({"T": 24, "beta": 1, "diam": 1, "g_lip": 1, "sigma": 1, "a": 0.5, "c": 1})";
  double v = 0.0;
  REQUIRE(battsched_fv_norm_expdecay(params, 1, &v) == BATTSCHED_OK);
  CHECK(v == doctest::Approx(1.118033988749895).epsilon(1e-12));
  REQUIRE(battsched_bound_iid(params, 24, &v) == BATTSCHED_OK);
  CHECK(v == doctest::Approx(2.0 + 48.0).epsilon(1e-12));
  REQUIRE(battsched_bound_expdecay(params, 2, &v) == BATTSCHED_OK);
  CHECK(v > 0.0);
}

TEST_CASE("recipe commands run through the C API") {
  const auto dir = tmp_dir("recipes");
  const std::string cfg = R"({
    "master_seed": 5,
    "scoring": {"months": 1, "include_grid": true},
    "policy": {"horizon": 6, "beta": 0.1},
    "sweep": {"v_max": 2},
    "env": {"synthetic": {"n_days": 30}}
  })";
  CHECK(battsched_cmd_gen_data(cfg.c_str(), dir.c_str()) == BATTSCHED_OK);
  CHECK(fs::exists(dir + "/buildings.csv"));
  CHECK(battsched_cmd_sweep(cfg.c_str(), dir.c_str()) == BATTSCHED_OK);
  CHECK(fs::exists(dir + "/results.json"));
  CHECK(fs::exists(dir + "/grid.csv"));
  CHECK(battsched_cmd_curves(cfg.c_str(), dir.c_str()) == BATTSCHED_OK);
  CHECK(fs::exists(dir + "/curves.csv"));
  // correlate needs >= 3 rows; the 2-row curve file is a config-class error
  CHECK(battsched_cmd_correlate((dir + "/curves.csv").c_str(),
                                (dir + "/corr.json").c_str()) ==
        BATTSCHED_ERR_CONFIG);
  const char* bp = R"({"T": 24, "sigma": 0})";
  CHECK(battsched_cmd_bounds(bp, 6, (dir + "/tradeoff.csv").c_str()) ==
        BATTSCHED_OK);
  CHECK(battsched_cmd_simulate(cfg.c_str(), dir.c_str()) == BATTSCHED_OK);
  CHECK(fs::exists(dir + "/trace.csv"));
  CHECK(fs::exists(dir + "/kpis.json"));
}
