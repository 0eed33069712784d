#pragma once

#include <vector>

#include "battsched/timeseries.hpp"

// Accuracy and stability metrics for rolling-origin forecasts.
//
// Point forecasts are scored with MAE (accuracy) and the mean absolute
// change MAC (stability). Scenario forecasts are scored with the energy
// score (accuracy) and the one-dimensional earth mover's distance between
// scenario sets (stability). Stability comes in two orientations:
//
//   vertical    - disagreement between windows issued from different origins
//                 about the same target hours (revision-to-revision change);
//   horizontal  - step-to-step change inside a single window.
//
// Vertical metrics generalize the adjacent-origin definition to any origin
// spacing by averaging over the actual overlap region; at spacing 1 they
// reduce to the adjacent-origin forms exactly.

namespace battsched::metrics {

// Mean absolute error of a point window against the realized values.
double mae(const ForecastWindow& window, const TimeSeries& truth);

// Vertical stability of point forecasts: mean absolute revision of the
// target hours both windows cover.
double mac_v(const ForecastWindow& w_prev, const ForecastWindow& w_next);

// Horizontal stability of one point window: mean absolute increment between
// consecutive steps. Requires horizon >= 2.
double mac_h(const ForecastWindow& window);

// Earth mover's distance between two equally sized one-dimensional sample
// sets: mean absolute difference of the sorted samples.
double emd_1d(std::vector<double> p, std::vector<double> q);

// Vertical stability of scenario forecasts: mean over the overlapping target
// hours of the EMD between the two windows' scenario sets for that hour.
double emd_v(const ForecastWindow& w_prev, const ForecastWindow& w_next);

// Horizontal stability of one scenario window: mean EMD between the scenario
// sets of consecutive steps. Requires horizon >= 2.
double emd_h(const ForecastWindow& window);

// Energy score of a scenario window against the realized values, evaluated
// per target hour with the scalar absolute-value norm and averaged across
// the horizon. p is the norm order (default 1, which puts the score in the
// same units as MAE).
double energy_score(const ForecastWindow& window, const TimeSeries& truth,
                    double p = 1.0);

// Sample Pearson correlation; requires length >= 2 and nonzero variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

enum class ArchiveMetric { Mae, MacV, MacH, EnergyScore, EmdV, EmdH };

const char* archive_metric_name(ArchiveMetric m);
ArchiveMetric archive_metric_from_name(const std::string& name);

// Mean of the per-window metric over the archive; vertical metrics average
// over consecutive window pairs instead and require at least two overlapping
// windows.
double archive_metric(const ForecastArchive& archive, const TimeSeries& truth,
                      ArchiveMetric metric, double p = 1.0);

// Committed-span variants: the same metrics restricted to the hours a window
// is actually in force before the next revision replaces it (its first `span`
// steps). These are the quantities the experiment recipes track against the
// commitment level. Horizontal metrics need at least two steps, so their
// span is clamped up to 2.
double mac_v_committed(const ForecastWindow& w_prev,
                       const ForecastWindow& w_next, Hour span);
double emd_v_committed(const ForecastWindow& w_prev,
                       const ForecastWindow& w_next, Hour span);
double archive_metric_committed(const ForecastArchive& archive,
                                const TimeSeries& truth, ArchiveMetric metric,
                                Hour span, double p = 1.0);

}  // namespace battsched::metrics
