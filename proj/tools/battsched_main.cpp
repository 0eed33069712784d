// battsched command line: drives the shared library through its C interface.
//
//   battsched gen-data  --out DIR [config flags]
//   battsched sweep     --out DIR [config flags]
//   battsched curves    --out DIR [config flags]
//   battsched correlate --curves FILE --out FILE
//   battsched bounds    --out FILE [--T N --beta X --sigma X --a X ...]
//   battsched simulate  --out DIR [config flags]
//
// A JSON config file (--config) supplies everything; flags override single
// fields. Exit codes: 0 ok, 2 config error, 3 data error, 4 solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "battsched/battsched.h"

namespace {

using nlohmann::json;

struct Overrides {
  std::optional<long long> master_seed;
  std::optional<int> months;
  std::optional<bool> include_grid;
  std::optional<long long> v_max;
  std::optional<long long> v_f, v_o;
  std::optional<int> horizon;
  std::optional<double> beta, w_co2;
  std::optional<std::string> algorithm;
  std::optional<bool> stochastic;
  std::optional<int> n_scenarios;
  std::optional<double> noise_sigma, noise_a, noise_c;
  std::optional<std::string> noise_kind;
  std::optional<double> sigma_auto;
  std::optional<int> n_buildings;
  std::optional<std::string> archive_csv, archive_kind;
  std::optional<int> workers;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file " << path << "\n";
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    std::cerr << "error: config file is not valid JSON: " << e.what() << "\n";
    std::exit(2);
  }
}

std::string apply_overrides(json cfg, const Overrides& ov) {
  if (ov.master_seed) cfg["master_seed"] = *ov.master_seed;
  if (ov.months) cfg["scoring"]["months"] = *ov.months;
  if (ov.include_grid) cfg["scoring"]["include_grid"] = *ov.include_grid;
  if (ov.v_max) cfg["sweep"]["v_max"] = *ov.v_max;
  if (ov.v_f) cfg["policy"]["v_f"] = *ov.v_f;
  if (ov.v_o) cfg["policy"]["v_o"] = *ov.v_o;
  if (ov.horizon) cfg["policy"]["horizon"] = *ov.horizon;
  if (ov.beta) cfg["policy"]["beta"] = *ov.beta;
  if (ov.w_co2) cfg["policy"]["w_co2"] = *ov.w_co2;
  if (ov.algorithm) cfg["policy"]["algorithm"] = *ov.algorithm;
  if (ov.stochastic) cfg["stochastic"]["enabled"] = *ov.stochastic;
  if (ov.n_scenarios) cfg["stochastic"]["n_scenarios"] = *ov.n_scenarios;
  if (ov.noise_sigma) cfg["forecast"]["noise"]["sigma"] = *ov.noise_sigma;
  if (ov.noise_a) cfg["forecast"]["noise"]["a"] = *ov.noise_a;
  if (ov.noise_c) cfg["forecast"]["noise"]["c"] = *ov.noise_c;
  if (ov.noise_kind) cfg["forecast"]["noise"]["kind"] = *ov.noise_kind;
  if (ov.sigma_auto) cfg["forecast"]["sigma_auto_mae_fraction"] = *ov.sigma_auto;
  if (ov.n_buildings) cfg["env"]["synthetic"]["n_buildings"] = *ov.n_buildings;
  if (ov.workers) cfg["workers"] = *ov.workers;
  if (ov.archive_csv) {
    cfg["forecast"].erase("noise");
    cfg["forecast"]["archive_csv"]["path"] = *ov.archive_csv;
    cfg["forecast"]["archive_csv"]["kind"] =
        ov.archive_kind ? *ov.archive_kind : "point";
  }
  return cfg.dump();
}

int report(battsched_status st) {
  if (st != BATTSCHED_OK)
    std::cerr << "error: " << battsched_last_error() << "\n";
  return static_cast<int>(st);
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.master_seed, "master seed");
  cmd->add_option("--months", ov.months, "scoring months (730 h each)");
  cmd->add_option("--include-grid", ov.include_grid,
                  "include grid KPIs in scores");
  cmd->add_option("--v-max", ov.v_max, "largest commitment in the sweep");
  cmd->add_option("--v-f", ov.v_f, "forecast commitment");
  cmd->add_option("--v-o", ov.v_o, "optimization commitment");
  cmd->add_option("--horizon", ov.horizon, "lookahead horizon (hours)");
  cmd->add_option("--beta", ov.beta, "switching-cost weight");
  cmd->add_option("--w-co2", ov.w_co2, "carbon weight in the lookahead");
  cmd->add_option("--algorithm", ov.algorithm, "fhc or afhc");
  cmd->add_option("--stochastic", ov.stochastic, "scenario-based lookahead");
  cmd->add_option("--scenarios", ov.n_scenarios, "scenario count");
  cmd->add_option("--sigma", ov.noise_sigma, "forecast noise scale");
  cmd->add_option("--noise-a", ov.noise_a, "exp-decay rate");
  cmd->add_option("--noise-c", ov.noise_c, "exp-decay magnitude");
  cmd->add_option("--noise-kind", ov.noise_kind, "iid or exp_decay");
  cmd->add_option("--sigma-auto", ov.sigma_auto,
                  "tune sigma to this fraction of mean load as MAE");
  cmd->add_option("--buildings", ov.n_buildings, "synthetic building count");
  cmd->add_option("--archive-csv", ov.archive_csv,
                  "use an imported forecast archive (simulate only)");
  cmd->add_option("--archive-kind", ov.archive_kind, "point or scenario");
  cmd->add_option("--workers", ov.workers,
                  "concurrent sweep cells (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"battery scheduling benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);

  std::string out_dir = "out";
  Overrides ov;

  auto* gen = app.add_subcommand("gen-data", "write synthetic environment CSVs");
  gen->add_option("--out", out_dir, "output directory");
  add_override_flags(gen, ov);

  auto* sweep = app.add_subcommand(
      "sweep", "commitment grid -> results.json + grid.csv");
  sweep->add_option("--out", out_dir, "output directory");
  add_override_flags(sweep, ov);

  auto* curves = app.add_subcommand(
      "curves", "metrics and scores vs commitment -> curves.csv");
  curves->add_option("--out", out_dir, "output directory");
  add_override_flags(curves, ov);

  std::string curves_path, corr_out = "corr.json";
  auto* corr = app.add_subcommand(
      "correlate", "metric/score correlations from a curves.csv");
  corr->add_option("--curves", curves_path, "curves.csv path")->required();
  corr->add_option("--out", corr_out, "output JSON path");

  auto* bnd = app.add_subcommand("bounds",
                                 "commitment trade-off bounds -> CSV");
  std::string bounds_out = "tradeoff.csv";
  double bT = 24, bbeta = 1, bdiam = 1, bglip = 1, balpha = 1, bsigma = 1,
         ba = 0.9, bc = 1, bopt = 0;
  long long bvmax = 12;
  bnd->add_option("--out", bounds_out, "output CSV path");
  bnd->add_option("--T", bT, "horizon length (steps)");
  bnd->add_option("--beta", bbeta, "switching weight");
  bnd->add_option("--diam", bdiam, "action-set diameter");
  bnd->add_option("--g-lip", bglip, "stage-cost Lipschitz constant");
  bnd->add_option("--alpha", balpha, "Hoelder exponent");
  bnd->add_option("--sigma", bsigma, "noise scale");
  bnd->add_option("--a", ba, "correlation decay rate");
  bnd->add_option("--c", bc, "correlation magnitude");
  bnd->add_option("--opt-cost", bopt, "reference offline cost");
  bnd->add_option("--v-max", bvmax, "largest commitment to tabulate");

  auto* sim = app.add_subcommand("simulate",
                                 "single policy run with full trace dump");
  sim->add_option("--out", out_dir, "output directory");
  add_override_flags(sim, ov);

  CLI11_PARSE(app, argc, argv);

  const json base = load_config(config_path);

  if (gen->parsed())
    return report(
        battsched_cmd_gen_data(apply_overrides(base, ov).c_str(), out_dir.c_str()));
  if (sweep->parsed())
    return report(
        battsched_cmd_sweep(apply_overrides(base, ov).c_str(), out_dir.c_str()));
  if (curves->parsed())
    return report(
        battsched_cmd_curves(apply_overrides(base, ov).c_str(), out_dir.c_str()));
  if (corr->parsed())
    return report(battsched_cmd_correlate(curves_path.c_str(), corr_out.c_str()));
  if (bnd->parsed()) {
    const json params = {{"T", bT},       {"beta", bbeta}, {"diam", bdiam},
                         {"g_lip", bglip}, {"alpha", balpha}, {"sigma", bsigma},
                         {"a", ba},       {"c", bc},       {"opt_cost", bopt}};
    return report(battsched_cmd_bounds(params.dump().c_str(), bvmax,
                                       bounds_out.c_str()));
  }
  if (sim->parsed())
    return report(
        battsched_cmd_simulate(apply_overrides(base, ov).c_str(), out_dir.c_str()));
  return 2;
}
