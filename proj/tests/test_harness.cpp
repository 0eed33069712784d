#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "battsched/csvio.hpp"
#include "battsched/forecast.hpp"
#include "battsched/harness.hpp"

using namespace battsched;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "battsched_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

const char* kTinyConfig = R"({
  "master_seed": 7,
  "scoring": {"months": 1, "include_grid": true},
  "policy": {"horizon": 8, "beta": 0.1},
  "sweep": {"v_max": 3},
  "env": {"synthetic": {"n_days": 30}}
})";

}  // namespace

TEST_CASE("config parsing applies defaults and validates") {
  auto cfg = harness::parse_config(kTinyConfig);
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.months == 1);
  CHECK(cfg.v_max == 3);
  CHECK(cfg.policy.horizon == 8);
  CHECK(cfg.policy.beta == 0.1);
  CHECK(cfg.noise.kind == NoiseModel::Kind::ExpDecay);  // default

  CHECK_THROWS_AS(harness::parse_config("not json"), Error);
  CHECK_THROWS_AS(harness::parse_config(R"({"rng": "mt19937"})"), Error);
  CHECK_THROWS_AS(
      harness::parse_config(R"({"policy": {"algorithm": "rl"}})"), Error);
  CHECK_THROWS_AS(
      harness::parse_config(R"({"scoring": {"months": 0}})"), Error);
}

TEST_CASE("config echo is normalized and reparses to itself") {
  auto cfg = harness::parse_config(kTinyConfig);
  const std::string echo = harness::config_to_json(cfg);
  auto cfg2 = harness::parse_config(echo);
  CHECK(harness::config_to_json(cfg2) == echo);
}

TEST_CASE("environment CSV round-trip is identical") {
  auto cfg = harness::parse_config(kTinyConfig);
  const auto dir = tmp_dir("gendata");
  harness::cmd_gen_data(cfg, dir);

  auto env = harness::prepare_env(cfg);
  auto back = csvio::read_environment(dir + "/buildings.csv",
                                      dir + "/district.csv",
                                      {env.buildings()[0].battery});
  CHECK(back.n_buildings() == env.n_buildings());
  CHECK(back.price().values() == env.price().values());
  CHECK(back.carbon().values() == env.carbon().values());
  CHECK(back.buildings()[0].load.values() ==
        env.buildings()[0].load.values());
  CHECK(back.buildings()[0].pv.values() == env.buildings()[0].pv.values());

  // different seed, different files
  auto cfg2 = cfg;
  cfg2.master_seed = 8;
  const auto dir2 = tmp_dir("gendata2");
  harness::cmd_gen_data(cfg2, dir2);
  CHECK(slurp(dir + "/buildings.csv") != slurp(dir2 + "/buildings.csv"));
}

TEST_CASE("multi-building gen-data lists every building") {
  auto cfg = harness::parse_config(R"({
    "scoring": {"months": 1},
    "policy": {"horizon": 4},
    "env": {"synthetic": {"n_days": 2, "n_buildings": 3}}
  })");
  const auto dir = tmp_dir("gendata3");
  harness::cmd_gen_data(cfg, dir);
  const auto text = slurp(dir + "/buildings.csv");
  for (const char* tag : {"\n0,0,", "\n1,1,", "\n2,2,"})
    CHECK(text.find(tag) != std::string::npos);
}

TEST_CASE("forecast archive CSV round-trip") {
  TimeSeries truth(0, std::vector<double>(40, 3.5));
  NoiseModel m;
  m.kind = NoiseModel::Kind::Iid;
  m.sigma = 0.7;
  m.seed = 5;
  const auto dir = tmp_dir("archive");

  SUBCASE("point archives") {
    auto ar = generate_point_archive(truth, 6, 2, m);
    csvio::write_archive(ar, dir + "/point.csv");
    auto back = csvio::read_archive(dir + "/point.csv", ForecastKind::Point);
    CHECK(back.revision_interval() == 2);
    CHECK(back.horizon() == 6);
    REQUIRE(back.windows().size() == ar.windows().size());
    for (std::size_t i = 0; i < ar.windows().size(); ++i)
      CHECK(back.windows()[i].point_values() ==
            ar.windows()[i].point_values());
  }

  SUBCASE("scenario archives") {
    auto point = generate_point_archive(truth, 5, 3, m);
    auto ar = generate_scenario_archive(point, {4, 0.2, 11});
    csvio::write_archive(ar, dir + "/scen.csv");
    auto back = csvio::read_archive(dir + "/scen.csv", ForecastKind::Scenario);
    CHECK(back.n_scenarios() == 4);
    REQUIRE(back.windows().size() == ar.windows().size());
    for (std::size_t i = 0; i < ar.windows().size(); ++i)
      CHECK(back.windows()[i].scenario_rows() ==
            ar.windows()[i].scenario_rows());
  }
}

TEST_CASE("archive import rejects malformed files with row numbers") {
  const auto dir = tmp_dir("badcsv");

  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir + "/" + name);
    out << text;
    return dir + "/" + name;
  };

  SUBCASE("bad header") {
    const auto p = write("a.csv", "origin,target,value\n");
    CHECK_THROWS_AS(csvio::read_archive(p, ForecastKind::Point), Error);
  }

  SUBCASE("ragged rows name the offending origin") {
    const auto p = write("b.csv",
                         "origin,target,scenario,value\n"
                         "0,1,0,1.0\n0,2,0,1.0\n"
                         "2,3,0,1.0\n");
    try {
      csvio::read_archive(p, ForecastKind::Point);
      FAIL("expected a format error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::Format);
    }
  }

  SUBCASE("non-constant origin spacing") {
    const auto p = write("c.csv",
                         "origin,target,scenario,value\n"
                         "0,1,0,1.0\n2,3,0,1.0\n5,6,0,1.0\n");
    CHECK_THROWS_AS(csvio::read_archive(p, ForecastKind::Point), Error);
  }

  SUBCASE("non-finite value with its row number") {
    const auto p = write("d.csv",
                         "origin,target,scenario,value\n"
                         "0,1,0,1.0\n0,2,0,nan\n");
    try {
      csvio::read_archive(p, ForecastKind::Point);
      FAIL("expected a format error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }

  SUBCASE("gap in targets") {
    const auto p = write("e.csv",
                         "origin,target,scenario,value\n"
                         "0,1,0,1.0\n0,3,0,1.0\n");
    CHECK_THROWS_AS(csvio::read_archive(p, ForecastKind::Point), Error);
  }

  SUBCASE("scenario rows in a point archive") {
    const auto p = write("f.csv",
                         "origin,target,scenario,value\n"
                         "0,1,0,1.0\n0,1,1,2.0\n");
    CHECK_THROWS_AS(csvio::read_archive(p, ForecastKind::Point), Error);
  }
}

TEST_CASE("sweep emits a deterministic triangular grid") {
  auto cfg = harness::parse_config(kTinyConfig);
  const auto dir = tmp_dir("sweep");
  harness::cmd_sweep(cfg, dir);
  const std::string first = slurp(dir + "/results.json");
  CHECK(first.find("\"cells\"") != std::string::npos);
  // 1 + 2 + 3 cells
  CHECK(first.find("\"v_f\": 3") != std::string::npos);

  harness::cmd_sweep(cfg, dir);
  CHECK(slurp(dir + "/results.json") == first);

  const std::string grid = slurp(dir + "/grid.csv");
  CHECK(grid.rfind("v_f,vo_1,vo_2,vo_3,row_best_v_o\n", 0) == 0);
  int lines = 0;
  for (char ch : grid)
    if (ch == '\n') ++lines;
  CHECK(lines == 4);  // header + 3 rows
}

TEST_CASE("curves emits one row per commitment and correlate consumes it") {
  auto cfg = harness::parse_config(kTinyConfig);
  const auto dir = tmp_dir("curves");
  harness::cmd_curves(cfg, dir);
  const std::string text = slurp(dir + "/curves.csv");
  CHECK(text.rfind("v,mae,mac_v,mac_h,score,score_with_grid\n", 0) == 0);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 4);  // header + v = 1..3

  harness::cmd_correlate(dir + "/curves.csv", dir + "/corr.json");
  const std::string corr = slurp(dir + "/corr.json");
  CHECK(corr.find("\"mae\"") != std::string::npos);
  CHECK(corr.find("\"score\"") != std::string::npos);
}

TEST_CASE("correlate flags degenerate columns as null") {
  const auto dir = tmp_dir("corr");
  {
    std::ofstream out(dir + "/curves.csv");
    out << "v,mae,mac_v,mac_h,score\n";
    out << "1,1.0,0.5,0.0,0.9\n2,2.0,0.4,0.0,0.91\n3,3.0,0.3,0.0,0.95\n";
  }
  harness::cmd_correlate(dir + "/curves.csv", dir + "/corr.json");
  const std::string corr = slurp(dir + "/corr.json");
  // mac_h column has zero variance -> null
  CHECK(corr.find("\"mac_h\": {\n      \"score\": null") != std::string::npos);
  // identical column correlates to 1
  CHECK(corr.find("\"mae\"") != std::string::npos);
}

TEST_CASE("correlate needs at least three rows") {
  const auto dir = tmp_dir("corrshort");
  {
    std::ofstream out(dir + "/curves.csv");
    out << "v,mae,score\n1,1.0,0.9\n2,2.0,0.91\n";
  }
  CHECK_THROWS_AS(harness::cmd_correlate(dir + "/curves.csv", dir + "/c.json"),
                  Error);
}

TEST_CASE("bounds command writes the tabulated curve") {
  const auto dir = tmp_dir("bounds");
  bounds::BoundParams p;
  p.total_steps = 24;
  p.beta = 1;
  p.diam = 1;
  p.g_lip = 1;
  p.sigma = 0;
  p.a = 0.9;
  p.c = 1;
  harness::cmd_bounds(p, 5, dir + "/tradeoff.csv");
  const std::string text = slurp(dir + "/tradeoff.csv");
  CHECK(text.rfind("v,bound_iid,bound_exp_decay,argmin_iid,argmin_exp_decay\n",
                   0) == 0);
  // sigma = 0: both argmin markers on the last row
  CHECK(text.find("\n5,") != std::string::npos);
  CHECK(text.find(",1,1\n") != std::string::npos);
  int argmin_rows = 0;
  std::istringstream ss(text);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line))
    if (line.find(",1,1") != std::string::npos) ++argmin_rows;
  CHECK(argmin_rows == 1);
}

TEST_CASE("simulate writes a trace and KPI report") {
  auto cfg = harness::parse_config(R"({
    "master_seed": 3,
    "scoring": {"months": 1, "include_grid": true},
    "policy": {"horizon": 8, "v_f": 2, "v_o": 2, "beta": 0.1},
    "env": {"synthetic": {"n_days": 30}}
  })");
  const auto dir = tmp_dir("simulate");
  harness::cmd_simulate(cfg, dir);
  const std::string trace = slurp(dir + "/trace.csv");
  CHECK(trace.rfind("hour,net_load,price,carbon,price_cost,carbon_cost,"
                    "action_b0,soc_b0\n",
                    0) == 0);
  const std::string kpis = slurp(dir + "/kpis.json");
  CHECK(kpis.find("\"avg_score\"") != std::string::npos);
  CHECK(kpis.find("\"realized_cost\"") != std::string::npos);
}

TEST_CASE("simulate accepts an imported archive") {
  auto gen_cfg = harness::parse_config(R"({
    "master_seed": 3,
    "scoring": {"months": 1},
    "policy": {"horizon": 8, "v_f": 2, "v_o": 2},
    "env": {"synthetic": {"n_days": 30}}
  })");
  const auto dir = tmp_dir("simimport");
  // build an archive file from the same environment
  auto env = harness::prepare_env(gen_cfg);
  auto noise = harness::prepare_noise(gen_cfg, env);
  auto archive = generate_point_archive(env.district_base(), 8, 2, noise);
  csvio::write_archive(archive, dir + "/archive.csv");

  auto cfg = harness::parse_config(std::string(R"({
    "master_seed": 3,
    "scoring": {"months": 1, "include_grid": false},
    "policy": {"horizon": 8, "v_f": 2, "v_o": 2},
    "env": {"synthetic": {"n_days": 30}},
    "forecast": {"archive_csv": {"path": ")") +
                                  dir + R"(/archive.csv", "kind": "point"}}
  })");
  harness::cmd_simulate(cfg, dir);
  CHECK(fs::exists(dir + "/kpis.json"));

  // sweep cannot regenerate forecasts from a fixed archive
  CHECK_THROWS_AS(harness::cmd_sweep(cfg, dir), Error);
}

TEST_CASE("nonexistent csv paths produce data errors") {
  auto cfg = harness::parse_config(R"({
    "env": {"csv": {"buildings": "/nonexistent/b.csv",
                     "district": "/nonexistent/d.csv",
                     "batteries": [{}]}}
  })");
  CHECK_THROWS_AS(harness::prepare_env(cfg), Error);
}
