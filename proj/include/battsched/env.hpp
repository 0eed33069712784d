#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "battsched/timeseries.hpp"

namespace battsched {

// Hours per scoring month. The load-factor KPI is defined over blocks of
// exactly this many hours, so traces scored with grid KPIs must span a whole
// number of them.
inline constexpr Hour kScoringMonthHours = 730;

struct BatterySpec {
  double capacity = 0.0;       // kWh
  double soc_min = 0.0;        // kWh
  double soc_max = 0.0;        // kWh
  double p_max = 0.0;          // kW (per-hour energy bound)
  double eta_charge = 1.0;     // (0, 1]
  double eta_discharge = 1.0;  // (0, 1]
  double soc_init = 0.0;       // kWh, within [soc_min, soc_max]

  void validate() const;
};

struct Building {
  TimeSeries load;  // kWh
  TimeSeries pv;    // kWh
  BatterySpec battery;
};

// The district: per-building load/PV/battery plus shared price and carbon
// intensity, all aligned to one absolute hour range.
class EnvironmentSeries {
 public:
  EnvironmentSeries() = default;
  EnvironmentSeries(std::vector<Building> buildings, TimeSeries price,
                    TimeSeries carbon);

  const std::vector<Building>& buildings() const { return buildings_; }
  const TimeSeries& price() const { return price_; }
  const TimeSeries& carbon() const { return carbon_; }
  std::size_t n_buildings() const { return buildings_.size(); }
  Hour start() const { return price_.start(); }
  Hour end() const { return price_.end(); }

  // Sum over buildings of load - pv at one hour / over the whole range.
  double base_load_at(Hour hour) const;
  TimeSeries district_base() const;

  std::vector<double> initial_soc() const;

 private:
  std::vector<Building> buildings_;
  TimeSeries price_;
  TimeSeries carbon_;
};

// A committed sequence of battery actions. actions[b][j] is the signed
// battery energy for building b at hour start + j: positive charges,
// negative discharges (grid-side energy in both cases).
struct Plan {
  Hour start = 0;
  std::vector<std::vector<double>> actions;

  Hour length() const {
    return actions.empty() ? 0 : static_cast<Hour>(actions.front().size());
  }
};

// Result of executing actions against the real environment. SOC trajectories
// obey the battery dynamics exactly; infeasible actions were clipped to the
// nearest feasible value and counted.
struct SimulationTrace {
  TimeSeries net_load;                           // district E_h
  std::vector<std::vector<double>> soc;          // [building][hour], end-of-hour
  std::vector<std::vector<double>> actions;      // executed, signed
  std::vector<double> price_cost;                // max(0, E_h * T_h) per hour
  std::vector<double> carbon_cost;               // max(0, E_h * O_h) per hour
  double anchor_net_load = 0.0;                  // district base at start-1
  bool has_anchor = false;
  long long clipped_steps = 0;

  Hour start() const { return net_load.start(); }
  Hour length() const { return static_cast<Hour>(net_load.size()); }
};

// KPI report relative to the internally computed zero-action baseline.
// Ratios are entry / baseline; grid quantities are only present when the
// trace was scored with grid KPIs.
struct KpiReport {
  double cost_ratio = 0.0;       // C
  double emissions_ratio = 0.0;  // G
  std::optional<double> ramping_ratio;      // normalized R
  std::optional<double> load_factor_ratio;  // normalized (1-L)
  std::optional<double> grid_score;         // D
  double avg_score = 0.0;
  std::optional<double> avg_score_with_grid;

  double raw_cost_entry = 0.0;
  double raw_cost_baseline = 0.0;
  double raw_emissions_entry = 0.0;
  double raw_emissions_baseline = 0.0;
  std::optional<double> raw_ramping_entry;
  std::optional<double> raw_ramping_baseline;
  std::optional<double> load_factor_entry;     // L
  std::optional<double> load_factor_baseline;
};

// Incremental executor used by the control loop; execute() wraps it.
class ExecutionState {
 public:
  ExecutionState(const EnvironmentSeries& env, Hour start,
                 std::vector<double> soc0);

  // Executes one hour with the desired signed action per building, clipping
  // to feasibility. Returns the realized district net load.
  double step(const std::vector<double>& desired);

  const std::vector<double>& soc() const { return soc_; }
  Hour next_hour() const { return hour_; }
  SimulationTrace finish() &&;

 private:
  const EnvironmentSeries* env_;
  Hour start_;
  Hour hour_;
  std::vector<double> soc_;
  std::vector<double> net_loads_;
  SimulationTrace trace_;
};

// Executes a plan hour by hour: SOC_t = SOC_{t-1} + eta_c * x_pos +
// x_neg / eta_d (x_neg <= 0, so SOC decreases on discharge); the grid sees
// x_pos + x_neg on top of load - pv. Actions that would leave the feasible
// range are clipped and counted.
SimulationTrace execute(const EnvironmentSeries& env, const Plan& plan,
                        const std::vector<double>& soc0);

// KPI scoring against the zero-action baseline. include_grid requires the
// trace to span a whole number of scoring months.
KpiReport score(const SimulationTrace& trace, const EnvironmentSeries& env,
                bool include_grid);

// Sum of absolute hour-to-hour net load changes within the trace.
double raw_ramping(const std::vector<double>& net_load);

// The cost functional the lookahead optimizes, realized on an executed trace:
// sum_h max(0, E_h * (T_h + w_co2 * O_h)) + beta * sum |E_h - E_{h-1}|,
// including the ramp from the anchor hour when the trace has one.
double realized_cost(const SimulationTrace& trace, const EnvironmentSeries& env,
                     double beta, double w_co2);

// Synthetic district generator: sinusoidal daily load and PV with Gaussian
// perturbations, a two-level time-of-use price and a smooth carbon intensity
// curve. The horizon is padded up to a whole number of scoring months, plus
// `extra_hours` for forecast targets past the scored range.
struct SyntheticEnvConfig {
  int n_buildings = 1;
  int n_days = 243;
  Hour extra_hours = 0;
  std::uint64_t seed = 0;

  double load_base = 10.0;
  double load_amp = 4.0;
  double load_noise = 0.5;
  int load_peak_hour = 21;  // hour of day where the load sinusoid peaks
  double pv_peak = 9.0;
  double pv_noise = 0.3;
  double price_offpeak = 0.25;  // $/kWh
  double price_peak = 0.30;
  int peak_start = 16;  // peak price hours [start, end)
  int peak_end = 21;
  double carbon_base = 0.30;  // kgCO2e/kWh
  double carbon_amp = 0.03;
  BatterySpec battery{10.0, 0.5, 9.5, 4.0, 0.90, 0.90, 5.0};

  void validate() const;
};

EnvironmentSeries make_synthetic_env(const SyntheticEnvConfig& cfg);

}  // namespace battsched
