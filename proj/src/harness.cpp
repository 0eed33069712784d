#include "battsched/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "battsched/csvio.hpp"
#include "battsched/metrics.hpp"
#include "battsched/rng.hpp"

namespace battsched::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

double get_num(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number()) fail(Errc::Config, std::string(key) + " must be a number");
  return j[key].get<double>();
}

long long get_int(const json& j, const char* key, long long def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer())
    fail(Errc::Config, std::string(key) + " must be an integer");
  return j[key].get<long long>();
}

bool get_bool(const json& j, const char* key, bool def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean()) fail(Errc::Config, std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_string()) fail(Errc::Config, std::string(key) + " must be a string");
  return j[key].get<std::string>();
}

BatterySpec battery_from_json(const json& j, const BatterySpec& def) {
  BatterySpec b = def;
  b.capacity = get_num(j, "capacity", def.capacity);
  b.soc_min = get_num(j, "soc_min", def.soc_min);
  b.soc_max = get_num(j, "soc_max", def.soc_max);
  b.p_max = get_num(j, "p_max", def.p_max);
  b.eta_charge = get_num(j, "eta_charge", def.eta_charge);
  b.eta_discharge = get_num(j, "eta_discharge", def.eta_discharge);
  b.soc_init = get_num(j, "soc_init", def.soc_init);
  b.validate();
  return b;
}

json battery_to_json(const BatterySpec& b) {
  return json{{"capacity", b.capacity},     {"soc_min", b.soc_min},
              {"soc_max", b.soc_max},       {"p_max", b.p_max},
              {"eta_charge", b.eta_charge}, {"eta_discharge", b.eta_discharge},
              {"soc_init", b.soc_init}};
}

json kpi_to_json(const KpiReport& k) {
  json j{{"cost_ratio", k.cost_ratio},
         {"emissions_ratio", k.emissions_ratio},
         {"avg_score", k.avg_score},
         {"raw_cost_entry", k.raw_cost_entry},
         {"raw_cost_baseline", k.raw_cost_baseline},
         {"raw_emissions_entry", k.raw_emissions_entry},
         {"raw_emissions_baseline", k.raw_emissions_baseline}};
  if (k.grid_score) {
    j["ramping_ratio"] = *k.ramping_ratio;
    j["load_factor_ratio"] = *k.load_factor_ratio;
    j["grid_score"] = *k.grid_score;
    j["avg_score_with_grid"] = *k.avg_score_with_grid;
    j["raw_ramping_entry"] = *k.raw_ramping_entry;
    j["raw_ramping_baseline"] = *k.raw_ramping_baseline;
    j["load_factor_entry"] = *k.load_factor_entry;
    j["load_factor_baseline"] = *k.load_factor_baseline;
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::Format, "cannot write " + path);
  out << text;
}

double primary_score(const GridCell& c, bool include_grid) {
  return include_grid ? *c.kpis.avg_score_with_grid : c.kpis.avg_score;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::Config, "config must be a JSON object");

  ExperimentConfig cfg;
  cfg.master_seed = static_cast<std::uint64_t>(get_int(j, "master_seed", 1));
  cfg.rng_name = get_str(j, "rng", std::string(rng::kAlgorithmName));
  if (cfg.rng_name != rng::kAlgorithmName)
    fail(Errc::Config, "unsupported rng '" + cfg.rng_name + "' (supported: " +
                           std::string(rng::kAlgorithmName) + ")");

  const json scoring = j.value("scoring", json::object());
  cfg.months = static_cast<int>(get_int(scoring, "months", 8));
  if (cfg.months < 1) fail(Errc::Config, "scoring.months must be >= 1");
  cfg.include_grid = get_bool(scoring, "include_grid", true);

  const json policy = j.value("policy", json::object());
  const std::string algo = get_str(policy, "algorithm", "fhc");
  if (algo == "fhc") cfg.policy.algorithm = PolicyConfig::Algorithm::Fhc;
  else if (algo == "afhc") cfg.policy.algorithm = PolicyConfig::Algorithm::Afhc;
  else fail(Errc::Config, "policy.algorithm must be 'fhc' or 'afhc'");
  cfg.policy.horizon = static_cast<int>(get_int(policy, "horizon", 24));
  cfg.policy.v_f = get_int(policy, "v_f", 1);
  cfg.policy.v_o = get_int(policy, "v_o", cfg.policy.v_f);
  cfg.policy.beta = get_num(policy, "beta", 0.1);
  cfg.policy.w_co2 = get_num(policy, "w_co2", 1.0);
  cfg.policy.lp_tol = get_num(policy, "lp_tol", 1e-9);
  cfg.policy.validate();

  const json sto = j.value("stochastic", json::object());
  cfg.stochastic = get_bool(sto, "enabled", false);
  cfg.scenario_cfg.n_scenarios =
      static_cast<int>(get_int(sto, "n_scenarios", 20));
  cfg.scenario_cfg.noise_scale = get_num(sto, "noise_scale", 0.1);
  cfg.scenario_seed_explicit = sto.contains("seed");
  cfg.scenario_cfg.seed =
      static_cast<std::uint64_t>(get_int(sto, "seed", 0));
  cfg.scenario_cfg.validate();

  const json sweep = j.value("sweep", json::object());
  cfg.v_max = get_int(sweep, "v_max", 12);
  if (cfg.v_max < 1) fail(Errc::Config, "sweep.v_max must be >= 1");
  cfg.workers = static_cast<int>(get_int(j, "workers", 0));
  if (cfg.workers < 0) fail(Errc::Config, "workers must be >= 0");

  const json env = j.value("env", json::object());
  if (env.contains("csv")) {
    const json& c = env["csv"];
    cfg.buildings_csv = get_str(c, "buildings", "");
    cfg.district_csv = get_str(c, "district", "");
    if (cfg.buildings_csv.empty() || cfg.district_csv.empty())
      fail(Errc::Config, "env.csv needs 'buildings' and 'district' paths");
    if (!c.contains("batteries") || !c["batteries"].is_array() ||
        c["batteries"].empty())
      fail(Errc::Config, "env.csv needs a non-empty 'batteries' array");
    for (const auto& bj : c["batteries"])
      cfg.csv_batteries.push_back(battery_from_json(bj, BatterySpec{
                                      10.0, 0.5, 9.5, 4.0, 0.90, 0.90, 5.0}));
  } else {
    const json s = env.value("synthetic", json::object());
    SyntheticEnvConfig& sc = cfg.synth;
    sc.n_buildings = static_cast<int>(get_int(s, "n_buildings", 1));
    // horizon tail is appended by prepare_env; n_days defaults to the
    // scored period
    sc.n_days = static_cast<int>(get_int(
        s, "n_days",
        cfg.months * kScoringMonthHours / 24));
    cfg.synth_seed_explicit = s.contains("seed");
    sc.seed = static_cast<std::uint64_t>(get_int(s, "seed", 0));
    sc.load_base = get_num(s, "load_base", 10.0);
    sc.load_amp = get_num(s, "load_amp", 4.0);
    sc.load_noise = get_num(s, "load_noise", 0.5);
    sc.load_peak_hour = static_cast<int>(get_int(s, "load_peak_hour", 21));
    sc.pv_peak = get_num(s, "pv_peak", 9.0);
    sc.pv_noise = get_num(s, "pv_noise", 0.3);
    sc.price_offpeak = get_num(s, "price_offpeak", 0.25);
    sc.price_peak = get_num(s, "price_peak", 0.30);
    sc.peak_start = static_cast<int>(get_int(s, "peak_start", 16));
    sc.peak_end = static_cast<int>(get_int(s, "peak_end", 21));
    sc.carbon_base = get_num(s, "carbon_base", 0.30);
    sc.carbon_amp = get_num(s, "carbon_amp", 0.03);
    sc.battery = battery_from_json(s.value("battery", json::object()),
                                   sc.battery);
  }

  const json fc = j.value("forecast", json::object());
  if (fc.contains("archive_csv")) {
    const json& a = fc["archive_csv"];
    cfg.archive_csv = get_str(a, "path", "");
    if (cfg.archive_csv.empty())
      fail(Errc::Config, "forecast.archive_csv needs a 'path'");
    const std::string kind = get_str(a, "kind", "point");
    if (kind == "point") cfg.archive_kind = ForecastKind::Point;
    else if (kind == "scenario") cfg.archive_kind = ForecastKind::Scenario;
    else fail(Errc::Config, "archive kind must be 'point' or 'scenario'");
  } else {
    const json n = fc.value("noise", json::object());
    const std::string kind = get_str(n, "kind", "exp_decay");
    if (kind == "iid") cfg.noise.kind = NoiseModel::Kind::Iid;
    else if (kind == "exp_decay") cfg.noise.kind = NoiseModel::Kind::ExpDecay;
    else fail(Errc::Config, "noise kind must be 'iid' or 'exp_decay'");
    cfg.noise.sigma = get_num(n, "sigma", 0.8);
    cfg.noise.a = get_num(n, "a", 0.8);
    cfg.noise.c = get_num(n, "c", 1.0);
    cfg.noise_seed_explicit = n.contains("seed");
    cfg.noise.seed = static_cast<std::uint64_t>(get_int(n, "seed", 0));
    cfg.noise.validate();
    if (fc.contains("sigma_auto_mae_fraction")) {
      cfg.sigma_auto_mae_fraction =
          get_num(fc, "sigma_auto_mae_fraction", 0.1);
      if (*cfg.sigma_auto_mae_fraction < 0.0)
        fail(Errc::Config, "sigma_auto_mae_fraction must be >= 0");
    }
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["master_seed"] = cfg.master_seed;
  j["rng"] = cfg.rng_name;
  j["scoring"] = {{"months", cfg.months}, {"include_grid", cfg.include_grid}};
  j["policy"] = {
      {"algorithm",
       cfg.policy.algorithm == PolicyConfig::Algorithm::Fhc ? "fhc" : "afhc"},
      {"horizon", cfg.policy.horizon},
      {"v_f", cfg.policy.v_f},
      {"v_o", cfg.policy.v_o},
      {"beta", cfg.policy.beta},
      {"w_co2", cfg.policy.w_co2},
      {"lp_tol", cfg.policy.lp_tol}};
  j["stochastic"] = {{"enabled", cfg.stochastic},
                     {"n_scenarios", cfg.scenario_cfg.n_scenarios},
                     {"noise_scale", cfg.scenario_cfg.noise_scale},
                     {"seed", cfg.scenario_cfg.seed}};
  j["sweep"] = {{"v_max", cfg.v_max}};
  j["workers"] = cfg.workers;
  if (cfg.env_from_csv()) {
    json bats = json::array();
    for (const auto& b : cfg.csv_batteries) bats.push_back(battery_to_json(b));
    j["env"] = {{"csv",
                 {{"buildings", cfg.buildings_csv},
                  {"district", cfg.district_csv},
                  {"batteries", bats}}}};
  } else {
    const auto& s = cfg.synth;
    j["env"] = {{"synthetic",
                 {{"n_buildings", s.n_buildings},
                  {"n_days", s.n_days},
                  {"seed", s.seed},
                  {"load_base", s.load_base},
                  {"load_amp", s.load_amp},
                  {"load_noise", s.load_noise},
                  {"load_peak_hour", s.load_peak_hour},
                  {"pv_peak", s.pv_peak},
                  {"pv_noise", s.pv_noise},
                  {"price_offpeak", s.price_offpeak},
                  {"price_peak", s.price_peak},
                  {"peak_start", s.peak_start},
                  {"peak_end", s.peak_end},
                  {"carbon_base", s.carbon_base},
                  {"carbon_amp", s.carbon_amp},
                  {"battery", battery_to_json(s.battery)}}}};
  }
  if (cfg.forecast_from_csv()) {
    j["forecast"] = {
        {"archive_csv",
         {{"path", cfg.archive_csv},
          {"kind", forecast_kind_name(cfg.archive_kind)}}}};
  } else {
    json n = {{"kind", cfg.noise.kind == NoiseModel::Kind::Iid ? "iid"
                                                               : "exp_decay"},
              {"sigma", cfg.noise.sigma},
              {"a", cfg.noise.a},
              {"c", cfg.noise.c},
              {"seed", cfg.noise.seed}};
    j["forecast"] = {{"noise", n}};
    if (cfg.sigma_auto_mae_fraction)
      j["forecast"]["sigma_auto_mae_fraction"] = *cfg.sigma_auto_mae_fraction;
  }
  return j.dump(2) + "\n";
}

EnvironmentSeries prepare_env(const ExperimentConfig& cfg) {
  if (cfg.env_from_csv())
    return csvio::read_environment(cfg.buildings_csv, cfg.district_csv,
                                   cfg.csv_batteries);
  SyntheticEnvConfig sc = cfg.synth;
  if (!cfg.synth_seed_explicit)
    sc.seed = rng::derive_seed(cfg.master_seed, "env");
  sc.extra_hours = cfg.policy.horizon;
  return make_synthetic_env(sc);
}

NoiseModel prepare_noise(const ExperimentConfig& cfg,
                         const EnvironmentSeries& env) {
  if (cfg.forecast_from_csv())
    fail(Errc::Config,
         "this command generates forecasts from a noise model; imported "
         "archives are supported by `simulate` only");
  NoiseModel m = cfg.noise;
  if (!cfg.noise_seed_explicit)
    m.seed = rng::derive_seed(cfg.master_seed, "forecast");
  if (cfg.sigma_auto_mae_fraction) {
    double mean_load = 0.0;
    for (const auto& b : env.buildings()) mean_load += b.load.mean();
    const double target = *cfg.sigma_auto_mae_fraction * mean_load;
    if (m.kind == NoiseModel::Kind::ExpDecay)
      m.sigma = sigma_for_target_mae(target, m.a, m.c, cfg.policy.horizon);
    else
      m.sigma = target / std::sqrt(2.0 / 3.14159265358979323846);
  }
  return m;
}

namespace {

ScenarioGenConfig prepare_scenarios(const ExperimentConfig& cfg) {
  ScenarioGenConfig sc = cfg.scenario_cfg;
  if (!cfg.scenario_seed_explicit)
    sc.seed = rng::derive_seed(cfg.master_seed, "scenarios");
  return sc;
}

json derived_seeds_json(const ExperimentConfig& cfg) {
  return json{{"env", rng::derive_seed(cfg.master_seed, "env")},
              {"forecast", rng::derive_seed(cfg.master_seed, "forecast")},
              {"scenarios", rng::derive_seed(cfg.master_seed, "scenarios")}};
}

DecisionGridConfig grid_config(const ExperimentConfig& cfg) {
  DecisionGridConfig g;
  g.v_max = cfg.v_max;
  g.horizon = cfg.policy.horizon;
  g.beta = cfg.policy.beta;
  g.w_co2 = cfg.policy.w_co2;
  g.lp_tol = cfg.policy.lp_tol;
  g.n_hours = cfg.n_hours();
  g.include_grid_kpis = cfg.include_grid;
  g.stochastic = cfg.stochastic;
  g.scenario_cfg = prepare_scenarios(cfg);
  g.workers = cfg.workers;
  return g;
}

json cell_to_json(const GridCell& c) {
  json j{{"v_f", c.v_f},
         {"v_o", c.v_o},
         {"kpis", kpi_to_json(c.kpis)},
         {"mae", c.mae},
         {"mac_v", c.mac_v},
         {"mac_h", c.mac_h},
         {"mae_full", c.mae_full},
         {"mac_v_full", c.mac_v_full},
         {"mac_h_full", c.mac_h_full},
         {"clipped_steps", c.clipped_steps}};
  if (c.kpis_stochastic) {
    j["stochastic"] = {{"kpis", kpi_to_json(*c.kpis_stochastic)},
                       {"es", *c.es},
                       {"emd_v", *c.emd_v},
                       {"emd_h", *c.emd_h}};
  }
  return j;
}

}  // namespace

void cmd_gen_data(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentSeries env = prepare_env(cfg);
  fs::create_directories(out_dir);
  csvio::write_environment(env, out_dir + "/buildings.csv",
                           out_dir + "/district.csv");
}

void cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentSeries env = prepare_env(cfg);
  const NoiseModel noise = prepare_noise(cfg, env);
  const TimeSeries truth = env.district_base();
  const auto cells = run_decision_grid(env, truth, noise, grid_config(cfg));

  fs::create_directories(out_dir);

  json results;
  results["version"] = kVersion;
  results["config"] = json::parse(config_to_json(cfg));
  results["derived_seeds"] = derived_seeds_json(cfg);
  results["applied_sigma"] = noise.sigma;
  json jcells = json::array();
  for (const auto& c : cells) jcells.push_back(cell_to_json(c));
  results["cells"] = std::move(jcells);

  // row-wise best cell (lowest primary score, first on ties)
  json row_best = json::array();
  for (Hour v_f = 1; v_f <= cfg.v_max; ++v_f) {
    Hour best_vo = 0;
    double best = 0.0;
    for (const auto& c : cells) {
      if (c.v_f != v_f) continue;
      const double s = primary_score(c, cfg.include_grid);
      if (best_vo == 0 || s < best) {
        best = s;
        best_vo = c.v_o;
      }
    }
    row_best.push_back(json{{"v_f", v_f}, {"v_o", best_vo}, {"score", best}});
  }
  results["row_best"] = std::move(row_best);
  write_text(out_dir + "/results.json", results.dump(2) + "\n");

  // lower-triangular matrix of the primary score, one row per v_f
  std::ostringstream grid;
  grid << "v_f";
  for (Hour v = 1; v <= cfg.v_max; ++v) grid << ",vo_" << v;
  grid << ",row_best_v_o\n";
  for (Hour v_f = 1; v_f <= cfg.v_max; ++v_f) {
    grid << v_f;
    Hour best_vo = 0;
    double best = 0.0;
    for (Hour v_o = 1; v_o <= cfg.v_max; ++v_o) {
      grid << ',';
      for (const auto& c : cells) {
        if (c.v_f == v_f && c.v_o == v_o) {
          const double s = primary_score(c, cfg.include_grid);
          grid << csvio::format_double(s);
          if (best_vo == 0 || s < best) {
            best = s;
            best_vo = v_o;
          }
          break;
        }
      }
    }
    grid << ',' << best_vo << '\n';
  }
  write_text(out_dir + "/grid.csv", grid.str());
}

void cmd_curves(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentSeries env = prepare_env(cfg);
  const NoiseModel noise = prepare_noise(cfg, env);
  const TimeSeries truth = env.district_base();
  DecisionGridConfig g = grid_config(cfg);

  std::vector<GridCell> cells(static_cast<std::size_t>(cfg.v_max));
  parallel_for_indexed(
      cells.size(), cfg.workers, [&](std::size_t i) {
        const Hour v = static_cast<Hour>(i + 1);
        const ForecastArchive archive =
            generate_point_archive(truth, g.horizon, v, noise);
        std::optional<ForecastArchive> scen;
        if (g.stochastic)
          scen = generate_scenario_archive(archive, g.scenario_cfg);
        cells[i] =
            run_grid_cell(env, truth, archive, scen ? &*scen : nullptr, v, v, g);
      });

  fs::create_directories(out_dir);
  std::ostringstream out;
  out << "v,mae,mac_v,mac_h,score";
  if (cfg.include_grid) out << ",score_with_grid";
  if (cfg.stochastic) {
    out << ",es,emd_v,emd_h,score_sto";
    if (cfg.include_grid) out << ",score_sto_grid";
  }
  out << '\n';
  for (const auto& c : cells) {
    out << c.v_f << ',' << csvio::format_double(c.mae) << ','
        << csvio::format_double(c.mac_v) << ','
        << csvio::format_double(c.mac_h) << ','
        << csvio::format_double(c.kpis.avg_score);
    if (cfg.include_grid)
      out << ',' << csvio::format_double(*c.kpis.avg_score_with_grid);
    if (cfg.stochastic) {
      out << ',' << csvio::format_double(*c.es) << ','
          << csvio::format_double(*c.emd_v) << ','
          << csvio::format_double(*c.emd_h) << ','
          << csvio::format_double(c.kpis_stochastic->avg_score);
      if (cfg.include_grid)
        out << ','
            << csvio::format_double(*c.kpis_stochastic->avg_score_with_grid);
    }
    out << '\n';
  }
  write_text(out_dir + "/curves.csv", out.str());
}

void cmd_correlate(const std::string& curves_csv, const std::string& out_path) {
  std::ifstream in(curves_csv);
  if (!in) fail(Errc::Format, "cannot open " + curves_csv);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::Format, curves_csv + ": empty file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
    line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) header.push_back(col);
  }
  std::map<std::string, std::vector<double>> cols;
  for (const auto& h : header) cols[h] = {};
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::size_t i = 0;
    while (std::getline(ls, field, ',')) {
      if (i >= header.size())
        fail(Errc::Format, curves_csv + ":" + std::to_string(ln) +
                               ": too many columns");
      try {
        cols[header[i]].push_back(std::stod(field));
      } catch (...) {
        fail(Errc::Format, curves_csv + ":" + std::to_string(ln) +
                               ": bad number '" + field + "'");
      }
      ++i;
    }
    if (i != header.size())
      fail(Errc::Format,
           curves_csv + ":" + std::to_string(ln) + ": missing columns");
  }
  const std::size_t n_rows = cols.begin()->second.size();
  if (n_rows < 3)
    fail(Errc::InvalidSpec, "correlation needs at least 3 curve rows");

  const std::vector<std::string> metric_names = {"mae",   "mac_v", "mac_h",
                                                 "es",    "emd_v", "emd_h"};
  const std::vector<std::string> score_names = {"score", "score_with_grid",
                                                "score_sto", "score_sto_grid"};
  json corr;
  for (const auto& m : metric_names) {
    if (!cols.count(m)) continue;
    json row;
    for (const auto& s : score_names) {
      if (!cols.count(s)) continue;
      try {
        row[s] = metrics::pearson(cols[m], cols[s]);
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroVariance) throw;
        row[s] = nullptr;  // flagged: degenerate column
      }
    }
    corr[m] = std::move(row);
  }
  json out{{"version", kVersion}, {"n_rows", n_rows}, {"correlations", corr}};
  write_text(out_path, out.dump(2) + "\n");
}

void cmd_bounds(const bounds::BoundParams& params, long long v_max,
                const std::string& out_path) {
  const auto curve = bounds::tradeoff_curve(params, v_max);
  std::ostringstream out;
  out << "v,bound_iid,bound_exp_decay,argmin_iid,argmin_exp_decay\n";
  for (const auto& pt : curve.points)
    out << pt.v << ',' << csvio::format_double(pt.bound_iid) << ','
        << csvio::format_double(pt.bound_expdecay) << ','
        << (pt.v == curve.argmin_iid ? 1 : 0) << ','
        << (pt.v == curve.argmin_expdecay ? 1 : 0) << '\n';
  write_text(out_path, out.str());
}

bounds::BoundParams bound_params_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::Config, std::string("bound params are not valid JSON: ") + e.what());
  }
  bounds::BoundParams p;
  p.total_steps = get_num(j, "T", 24.0);
  p.beta = get_num(j, "beta", 1.0);
  p.diam = get_num(j, "diam", 1.0);
  p.g_lip = get_num(j, "g_lip", 1.0);
  p.alpha = get_num(j, "alpha", 1.0);
  p.sigma = get_num(j, "sigma", 1.0);
  p.a = get_num(j, "a", 0.9);
  p.c = get_num(j, "c", 1.0);
  p.opt_cost = get_num(j, "opt_cost", 0.0);
  p.validate();
  return p;
}

void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentSeries env = prepare_env(cfg);
  const TimeSeries truth = env.district_base();
  const Hour n_hours = cfg.n_hours();

  ForecastArchive archive = [&] {
    if (cfg.forecast_from_csv())
      return csvio::read_archive(cfg.archive_csv, cfg.archive_kind);
    const NoiseModel noise = prepare_noise(cfg, env);
    ForecastArchive point =
        generate_point_archive(truth, cfg.policy.horizon, cfg.policy.v_f, noise);
    if (cfg.stochastic)
      return generate_scenario_archive(point, prepare_scenarios(cfg));
    return point;
  }();

  if (archive.revision_interval() != cfg.policy.v_f)
    fail(Errc::Config,
         "archive revision interval does not match policy.v_f");

  PolicyRunStats stats;
  SimulationTrace trace;
  if (cfg.policy.algorithm == PolicyConfig::Algorithm::Afhc) {
    trace = run_afhc(env, archive, cfg.policy, n_hours).trace;
  } else {
    trace = run_fhc(env, archive, cfg.policy, n_hours, &stats);
  }

  fs::create_directories(out_dir);

  std::ostringstream tc;
  tc << "hour,net_load,price,carbon,price_cost,carbon_cost";
  for (std::size_t b = 0; b < env.n_buildings(); ++b)
    tc << ",action_b" << b << ",soc_b" << b;
  tc << '\n';
  for (Hour i = 0; i < trace.length(); ++i) {
    const Hour h = trace.start() + i;
    tc << h << ',' << csvio::format_double(trace.net_load.at(h)) << ','
       << csvio::format_double(env.price().at(h)) << ','
       << csvio::format_double(env.carbon().at(h)) << ','
       << csvio::format_double(trace.price_cost[static_cast<std::size_t>(i)])
       << ','
       << csvio::format_double(trace.carbon_cost[static_cast<std::size_t>(i)]);
    for (std::size_t b = 0; b < env.n_buildings(); ++b)
      tc << ','
         << csvio::format_double(trace.actions[b][static_cast<std::size_t>(i)])
         << ','
         << csvio::format_double(trace.soc[b][static_cast<std::size_t>(i)]);
    tc << '\n';
  }
  write_text(out_dir + "/trace.csv", tc.str());

  const KpiReport kpis = score(trace, env, cfg.include_grid);
  json out;
  out["version"] = kVersion;
  out["config"] = json::parse(config_to_json(cfg));
  out["kpis"] = kpi_to_json(kpis);
  out["realized_cost"] =
      realized_cost(trace, env, cfg.policy.beta, cfg.policy.w_co2);
  out["clipped_steps"] = trace.clipped_steps;
  out["lp_solves"] = stats.solve_epochs.size();
  write_text(out_dir + "/kpis.json", out.dump(2) + "\n");
}

}  // namespace battsched::harness
