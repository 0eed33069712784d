#include "battsched/battsched.h"

#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "battsched/bounds.hpp"
#include "battsched/csvio.hpp"
#include "battsched/harness.hpp"
#include "battsched/metrics.hpp"
#include "battsched/policies.hpp"
#include "battsched/rng.hpp"

using namespace battsched;

namespace {

thread_local std::string g_last_error;

battsched_status status_for(Errc code) {
  switch (code) {
    case Errc::Config:
    case Errc::InvalidSpec:
    case Errc::Commitment:
    case Errc::Unsupported:
    case Errc::UndefinedMetric:
      return BATTSCHED_ERR_CONFIG;
    case Errc::SolverLimit:
      return BATTSCHED_ERR_SOLVER;
    default:
      return BATTSCHED_ERR_DATA;
  }
}

template <typename Fn>
battsched_status guarded(Fn&& fn) {
  try {
    fn();
    return BATTSCHED_OK;
  } catch (const Error& e) {
    g_last_error = std::string(errc_name(e.code())) + ": " + e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BATTSCHED_ERR_INTERNAL;
  }
}

const char* require(const char* p, const char* what) {
  if (!p) fail(Errc::Config, std::string(what) + " must not be null");
  return p;
}

}  // namespace

struct battsched_env {
  EnvironmentSeries env;
};

struct battsched_archive {
  ForecastArchive archive;
};

struct battsched_trace {
  SimulationTrace trace;
};

extern "C" {

const char* battsched_version(void) { return "0.1.0"; }

const char* battsched_last_error(void) { return g_last_error.c_str(); }

battsched_status battsched_env_create(const char* config_json,
                                      battsched_env** out) {
  return guarded([&] {
    if (!out) fail(Errc::Config, "out must not be null");
    const auto cfg = harness::parse_config(require(config_json, "config_json"));
    *out = new battsched_env{harness::prepare_env(cfg)};
  });
}

battsched_status battsched_env_write_csv(const battsched_env* env,
                                         const char* buildings_csv,
                                         const char* district_csv) {
  return guarded([&] {
    if (!env) fail(Errc::Config, "env handle must not be null");
    csvio::write_environment(env->env, require(buildings_csv, "buildings_csv"),
                             require(district_csv, "district_csv"));
  });
}

void battsched_env_free(battsched_env* env) { delete env; }

battsched_status battsched_env_hours(const battsched_env* env,
                                     long long* out) {
  return guarded([&] {
    if (!env || !out) fail(Errc::Config, "null argument");
    *out = env->env.end() - env->env.start();
  });
}

battsched_status battsched_env_buildings(const battsched_env* env, int* out) {
  return guarded([&] {
    if (!env || !out) fail(Errc::Config, "null argument");
    *out = static_cast<int>(env->env.n_buildings());
  });
}

battsched_status battsched_archive_generate(const battsched_env* env,
                                            const char* config_json,
                                            long long v_f,
                                            battsched_archive** out) {
  return guarded([&] {
    if (!env || !out) fail(Errc::Config, "null argument");
    auto cfg = harness::parse_config(require(config_json, "config_json"));
    const NoiseModel noise = harness::prepare_noise(cfg, env->env);
    const TimeSeries truth = env->env.district_base();
    ForecastArchive archive =
        generate_point_archive(truth, cfg.policy.horizon, v_f, noise);
    if (cfg.stochastic) {
      ScenarioGenConfig sc = cfg.scenario_cfg;
      if (!cfg.scenario_seed_explicit)
        sc.seed = rng::derive_seed(cfg.master_seed, "scenarios");
      archive = generate_scenario_archive(archive, sc);
    }
    *out = new battsched_archive{std::move(archive)};
  });
}

battsched_status battsched_archive_read_csv(const char* path, const char* kind,
                                            battsched_archive** out) {
  return guarded([&] {
    if (!out) fail(Errc::Config, "out must not be null");
    const std::string k = require(kind, "kind");
    ForecastKind fk;
    if (k == "point") fk = ForecastKind::Point;
    else if (k == "scenario") fk = ForecastKind::Scenario;
    else fail(Errc::Config, "kind must be 'point' or 'scenario'");
    *out = new battsched_archive{csvio::read_archive(require(path, "path"), fk)};
  });
}

battsched_status battsched_archive_write_csv(const battsched_archive* archive,
                                             const char* path) {
  return guarded([&] {
    if (!archive) fail(Errc::Config, "archive handle must not be null");
    csvio::write_archive(archive->archive, require(path, "path"));
  });
}

void battsched_archive_free(battsched_archive* archive) { delete archive; }

battsched_status battsched_archive_metric(const battsched_archive* archive,
                                          const battsched_env* env,
                                          const char* metric,
                                          long long committed_span,
                                          double* out) {
  return guarded([&] {
    if (!archive || !env || !out) fail(Errc::Config, "null argument");
    const auto m = metrics::archive_metric_from_name(require(metric, "metric"));
    const TimeSeries truth = env->env.district_base();
    *out = committed_span > 0
               ? metrics::archive_metric_committed(archive->archive, truth, m,
                                                   committed_span)
               : metrics::archive_metric(archive->archive, truth, m);
  });
}

battsched_status battsched_run_policy(const battsched_env* env,
                                      const battsched_archive* archive,
                                      const char* config_json,
                                      long long n_hours,
                                      battsched_trace** out) {
  return guarded([&] {
    if (!env || !archive || !out) fail(Errc::Config, "null argument");
    const auto cfg = harness::parse_config(require(config_json, "config_json"));
    SimulationTrace trace;
    if (cfg.policy.algorithm == PolicyConfig::Algorithm::Afhc)
      trace = run_afhc(env->env, archive->archive, cfg.policy, n_hours).trace;
    else
      trace = run_fhc(env->env, archive->archive, cfg.policy, n_hours);
    *out = new battsched_trace{std::move(trace)};
  });
}

battsched_status battsched_trace_write_csv(const battsched_trace* trace,
                                           const char* path) {
  return guarded([&] {
    if (!trace) fail(Errc::Config, "trace handle must not be null");
    std::string text = "hour,net_load\n";
    const auto& t = trace->trace;
    for (Hour i = 0; i < t.length(); ++i) {
      const Hour h = t.start() + i;
      text += std::to_string(h) + "," + csvio::format_double(t.net_load.at(h)) +
              "\n";
    }
    std::ofstream outf(require(path, "path"), std::ios::binary);
    if (!outf) fail(Errc::Format, std::string("cannot write ") + path);
    outf << text;
  });
}

battsched_status battsched_trace_score(const battsched_trace* trace,
                                       const battsched_env* env,
                                       int include_grid, char** kpi_json) {
  return guarded([&] {
    if (!trace || !env || !kpi_json) fail(Errc::Config, "null argument");
    const KpiReport k = score(trace->trace, env->env, include_grid != 0);
    nlohmann::json j{{"cost_ratio", k.cost_ratio},
                     {"emissions_ratio", k.emissions_ratio},
                     {"avg_score", k.avg_score}};
    if (k.grid_score) {
      j["grid_score"] = *k.grid_score;
      j["ramping_ratio"] = *k.ramping_ratio;
      j["load_factor_ratio"] = *k.load_factor_ratio;
      j["avg_score_with_grid"] = *k.avg_score_with_grid;
    }
    const std::string text = j.dump();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *kpi_json = buf;
  });
}

battsched_status battsched_trace_realized_cost(const battsched_trace* trace,
                                               const battsched_env* env,
                                               double beta, double w_co2,
                                               double* out) {
  return guarded([&] {
    if (!trace || !env || !out) fail(Errc::Config, "null argument");
    *out = realized_cost(trace->trace, env->env, beta, w_co2);
  });
}

void battsched_trace_free(battsched_trace* trace) { delete trace; }

void battsched_string_free(char* s) { delete[] s; }

battsched_status battsched_bound_iid(const char* params_json, long long v,
                                     double* out) {
  return guarded([&] {
    if (!out) fail(Errc::Config, "out must not be null");
    *out = bounds::bound_iid(
        harness::bound_params_from_json(require(params_json, "params_json")), v);
  });
}

battsched_status battsched_bound_expdecay(const char* params_json, long long v,
                                          double* out) {
  return guarded([&] {
    if (!out) fail(Errc::Config, "out must not be null");
    *out = bounds::bound_expdecay(
        harness::bound_params_from_json(require(params_json, "params_json")), v);
  });
}

battsched_status battsched_fv_norm_expdecay(const char* params_json,
                                            long long v, double* out) {
  return guarded([&] {
    if (!out) fail(Errc::Config, "out must not be null");
    *out = bounds::fv_norm_expdecay(
        harness::bound_params_from_json(require(params_json, "params_json")), v);
  });
}

battsched_status battsched_cmd_gen_data(const char* config_json,
                                        const char* out_dir) {
  return guarded([&] {
    harness::cmd_gen_data(harness::parse_config(require(config_json, "config")),
                          require(out_dir, "out_dir"));
  });
}

battsched_status battsched_cmd_sweep(const char* config_json,
                                     const char* out_dir) {
  return guarded([&] {
    harness::cmd_sweep(harness::parse_config(require(config_json, "config")),
                       require(out_dir, "out_dir"));
  });
}

battsched_status battsched_cmd_curves(const char* config_json,
                                      const char* out_dir) {
  return guarded([&] {
    harness::cmd_curves(harness::parse_config(require(config_json, "config")),
                        require(out_dir, "out_dir"));
  });
}

battsched_status battsched_cmd_correlate(const char* curves_csv,
                                         const char* out_path) {
  return guarded([&] {
    harness::cmd_correlate(require(curves_csv, "curves_csv"),
                           require(out_path, "out_path"));
  });
}

battsched_status battsched_cmd_bounds(const char* params_json, long long v_max,
                                      const char* out_path) {
  return guarded([&] {
    harness::cmd_bounds(
        harness::bound_params_from_json(require(params_json, "params_json")),
        v_max, require(out_path, "out_path"));
  });
}

battsched_status battsched_cmd_simulate(const char* config_json,
                                        const char* out_dir) {
  return guarded([&] {
    harness::cmd_simulate(harness::parse_config(require(config_json, "config")),
                          require(out_dir, "out_dir"));
  });
}

}  // extern "C"
