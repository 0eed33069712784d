#pragma once

#include <optional>
#include <string>

#include "battsched/bounds.hpp"
#include "battsched/env.hpp"
#include "battsched/forecast.hpp"
#include "battsched/policies.hpp"

// Experiment recipes behind the CLI: data generation, the commitment sweep,
// metric-vs-commitment curves, correlation tables, bound trade-off curves
// and single simulation runs. Configuration is one JSON document (schema in
// the README); a master seed fans out into named sub-seeds so every
// sub-result is reproducible in isolation.

namespace battsched::harness {

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  std::string rng_name = "splitmix64-boxmuller";

  // environment source: synthetic unless CSV paths are given
  SyntheticEnvConfig synth;
  bool synth_seed_explicit = false;
  std::string buildings_csv;
  std::string district_csv;
  std::vector<BatterySpec> csv_batteries;

  // forecast source: noise model unless an archive CSV is given
  NoiseModel noise;
  bool noise_seed_explicit = false;
  std::optional<double> sigma_auto_mae_fraction;
  std::string archive_csv;
  ForecastKind archive_kind = ForecastKind::Point;

  PolicyConfig policy;
  bool stochastic = false;
  ScenarioGenConfig scenario_cfg;
  bool scenario_seed_explicit = false;

  Hour v_max = 12;
  int months = 8;
  bool include_grid = true;
  int workers = 0;  // sweep cells run concurrently; 0 = hardware concurrency

  bool env_from_csv() const { return !buildings_csv.empty(); }
  bool forecast_from_csv() const { return !archive_csv.empty(); }
  Hour n_hours() const { return static_cast<Hour>(months) * kScoringMonthHours; }
};

// Parses the JSON config document, applying defaults and validating; the
// rng name must match the supported algorithm.
ExperimentConfig parse_config(const std::string& json_text);

// Normalized JSON echo of a config (the form embedded in results.json).
std::string config_to_json(const ExperimentConfig& cfg);

// Materializes the environment (synthetic sized to the scoring period plus
// the forecast tail, or loaded from CSV).
EnvironmentSeries prepare_env(const ExperimentConfig& cfg);

// The noise model with derived seed and (optionally) sigma tuned so the
// expected full-window MAE is a fraction of the mean district load.
NoiseModel prepare_noise(const ExperimentConfig& cfg,
                         const EnvironmentSeries& env);

void cmd_gen_data(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_curves(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_correlate(const std::string& curves_csv, const std::string& out_path);
void cmd_bounds(const bounds::BoundParams& params, long long v_max,
                const std::string& out_path);
void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);

// Shared with the C API: bound parameters from a JSON document.
bounds::BoundParams bound_params_from_json(const std::string& json_text);

}  // namespace battsched::harness
