#pragma once

#include <cstdint>

#include "battsched/timeseries.hpp"

// Rolling-origin forecast generation from ground truth plus structured noise.
// Forecast quality is a controlled experimental variable here: the error
// model, not a trained predictor, decides how good and how stable the
// forecasts are. Externally produced forecasts enter through the CSV import
// in csvio.hpp instead.

namespace battsched {

// Error model for point forecasts.
//
//   iid        - each (origin, step) gets a fresh Gaussian error of scale
//                sigma, independent of everything else.
//   exp_decay  - the error for target hour tau seen from origin t is a
//                filtered sum of per-hour innovations,
//                  eps(t, i) = sum_{s=0}^{i-1} c * a^s * e(tau - s),
//                with i = tau - t and e(.) a Gaussian(0, sigma^2) stream
//                indexed by absolute hour and shared across origins. Errors
//                for a fixed target hour shrink as the origin approaches it,
//                and consecutive revisions of the same hour are correlated.
//
// sigma = 0 yields the perfect forecast for either kind.
struct NoiseModel {
  enum class Kind { Iid, ExpDecay };
  Kind kind = Kind::Iid;
  double sigma = 0.0;
  double a = 0.0;  // decay rate in [0, 1), exp_decay only
  double c = 1.0;  // correlation magnitude > 0, exp_decay only
  std::uint64_t seed = 0;

  void validate() const;
};

// Scenario sets derived from a point forecast: scenario j perturbs each point
// value proportionally, y * (1 + noise_scale * z), with z standard normal.
// Values at exactly zero therefore stay at zero for every scenario.
struct ScenarioGenConfig {
  int n_scenarios = 1;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Point archive over every origin the truth can support: origins start at
// truth.start() and advance by `interval` while the full horizon stays inside
// the truth coverage.
ForecastArchive generate_point_archive(const TimeSeries& truth, int horizon,
                                       Hour interval, const NoiseModel& model);

// Scenario archive built on top of a point archive.
ForecastArchive generate_scenario_archive(const ForecastArchive& point,
                                          const ScenarioGenConfig& cfg);

// sigma that makes the expected full-window MAE of an exp_decay archive equal
// to `target_mae` (closed form from the error variance per step).
double sigma_for_target_mae(double target_mae, double a, double c, int horizon);

}  // namespace battsched
