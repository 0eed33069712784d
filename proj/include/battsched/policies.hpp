#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "battsched/env.hpp"
#include "battsched/forecast.hpp"
#include "battsched/lookahead.hpp"
#include "battsched/timeseries.hpp"

// The online control loop. A fixed-horizon controller replans every v_o
// hours from the newest forecast window (origins arrive every v_f hours, so
// re-solves between revisions run on a stale window truncated to its
// remaining hours), commits v_o actions and executes them against the real
// environment. v_f = v_o = 1 is receding-horizon control. The averaging
// variant runs v phase-shifted instances and executes the mean of their
// planned actions.

namespace battsched {

struct PolicyConfig {
  enum class Algorithm { Fhc, Afhc };
  Algorithm algorithm = Algorithm::Fhc;
  Hour v_f = 1;  // forecast commitment (archive revision interval)
  Hour v_o = 1;  // optimization commitment, v_o <= v_f
  int horizon = 24;
  double beta = 0.0;
  double w_co2 = 1.0;
  double lp_tol = 1e-9;

  void validate() const;
};

struct PolicyRunStats {
  std::vector<Hour> solve_epochs;
  long long lp_iterations = 0;
  long long clipped_steps = 0;
};

// Runs FHC(v_f, v_o) for n_hours starting right after the archive's first
// origin. The environment must cover the first origin hour (the anchor) and
// every executed hour; the archive must cover every lookahead target.
SimulationTrace run_fhc(const EnvironmentSeries& env,
                        const ForecastArchive& archive,
                        const PolicyConfig& cfg, Hour n_hours,
                        PolicyRunStats* stats = nullptr);

struct AfhcResult {
  SimulationTrace trace;
  // Each phase's own plan stream executed standalone (zero action before the
  // phase starts); the executed trace averages these per hour.
  std::vector<SimulationTrace> phase_traces;
};

// Averaging FHC with v = v_f = v_o phase-shifted instances. Phase k replans
// at epochs first_origin + k + m*v from its own predicted state; with one
// shared archive its windows are always k hours stale.
AfhcResult run_afhc(const EnvironmentSeries& env,
                    const ForecastArchive& archive, const PolicyConfig& cfg,
                    Hour n_hours);

// One cell of the commitment grid.
struct GridCell {
  Hour v_f = 0;
  Hour v_o = 0;
  KpiReport kpis;
  double mae = 0.0;    // committed-span forecast metrics
  double mac_v = 0.0;
  double mac_h = 0.0;
  double mae_full = 0.0;  // full-window variants
  double mac_v_full = 0.0;
  double mac_h_full = 0.0;
  long long clipped_steps = 0;
  std::optional<KpiReport> kpis_stochastic;
  std::optional<double> es;
  std::optional<double> emd_v;
  std::optional<double> emd_h;
};

struct DecisionGridConfig {
  Hour v_max = 12;
  int horizon = 24;
  double beta = 0.0;
  double w_co2 = 1.0;
  double lp_tol = 1e-9;
  Hour n_hours = 0;  // evaluation period (executed hours)
  bool include_grid_kpis = true;
  bool stochastic = false;
  ScenarioGenConfig scenario_cfg;
  int workers = 0;  // concurrent cells; 0 = hardware concurrency

  void validate() const;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads; exceptions are
// rethrown on the caller. Results must be written to pre-sized slots so the
// output order stays deterministic.
void parallel_for_indexed(std::size_t n, int workers,
                          const std::function<void(std::size_t)>& fn);

// One grid cell: FHC run plus scores and committed-span forecast metrics.
// `scen_archive` must be present when cfg.stochastic is set.
GridCell run_grid_cell(const EnvironmentSeries& env, const TimeSeries& truth,
                       const ForecastArchive& archive,
                       const ForecastArchive* scen_archive, Hour v_f, Hour v_o,
                       const DecisionGridConfig& cfg);

// Lower-triangular sweep over (v_f, v_o <= v_f). Forecast archives are
// regenerated per v_f from the same noise model and seed, so the underlying
// innovation stream is shared across cells. Cells are emitted in (v_f, v_o)
// order.
std::vector<GridCell> run_decision_grid(const EnvironmentSeries& env,
                                        const TimeSeries& truth,
                                        const NoiseModel& noise,
                                        const DecisionGridConfig& cfg);

}  // namespace battsched
