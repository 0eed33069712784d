#include "battsched/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace battsched {

namespace {

std::string range_str(Hour a, Hour b) {
  return "[" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

TimeSeries::TimeSeries(Hour start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
  if (values_.empty()) fail(Errc::InvalidSpec, "time series must be non-empty");
  for (double v : values_) {
    if (!std::isfinite(v))
      fail(Errc::InvalidSpec, "time series contains a non-finite value");
  }
}

double TimeSeries::at(Hour hour) const {
  if (hour < start_ || hour >= end())
    fail(Errc::Coverage, "hour " + std::to_string(hour) +
                             " outside series coverage " +
                             range_str(start_, end()));
  return values_[static_cast<std::size_t>(hour - start_)];
}

std::vector<double> TimeSeries::slice(Hour from, Hour len) const {
  if (len < 0) fail(Errc::InvalidSpec, "negative slice length");
  if (!covers(from, len))
    fail(Errc::Coverage, "requested hours " + range_str(from, from + len) +
                             " not covered by series " +
                             range_str(start_, end()));
  auto first = values_.begin() + static_cast<std::ptrdiff_t>(from - start_);
  return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(len));
}

double TimeSeries::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

ForecastWindow ForecastWindow::point(Hour origin, std::vector<double> values) {
  if (values.empty()) fail(Errc::InvalidSpec, "forecast window needs horizon >= 1");
  for (double v : values) {
    if (!std::isfinite(v))
      fail(Errc::InvalidSpec, "forecast window contains a non-finite value");
  }
  ForecastWindow w;
  w.kind_ = ForecastKind::Point;
  w.origin_ = origin;
  w.horizon_ = static_cast<int>(values.size());
  w.point_ = std::move(values);
  return w;
}

ForecastWindow ForecastWindow::scenario(Hour origin,
                                        std::vector<std::vector<double>> rows) {
  if (rows.empty()) fail(Errc::InvalidSpec, "scenario window needs N >= 1");
  const std::size_t h = rows.front().size();
  if (h == 0) fail(Errc::InvalidSpec, "scenario window needs horizon >= 1");
  for (const auto& row : rows) {
    if (row.size() != h)
      fail(Errc::InvalidSpec, "scenario rows must all have the same horizon");
    for (double v : row) {
      if (!std::isfinite(v))
        fail(Errc::InvalidSpec, "scenario window contains a non-finite value");
    }
  }
  ForecastWindow w;
  w.kind_ = ForecastKind::Scenario;
  w.origin_ = origin;
  w.horizon_ = static_cast<int>(h);
  w.scenarios_ = std::move(rows);
  return w;
}

const std::vector<double>& ForecastWindow::point_values() const {
  if (kind_ != ForecastKind::Point)
    fail(Errc::WrongKind, "expected a point forecast window");
  return point_;
}

const std::vector<std::vector<double>>& ForecastWindow::scenario_rows() const {
  if (kind_ != ForecastKind::Scenario)
    fail(Errc::WrongKind, "expected a scenario forecast window");
  return scenarios_;
}

double ForecastWindow::point_at(Hour hour) const {
  if (kind_ != ForecastKind::Point)
    fail(Errc::WrongKind, "expected a point forecast window");
  if (!covers(hour))
    fail(Errc::Coverage, "target hour " + std::to_string(hour) +
                             " outside window from origin " +
                             std::to_string(origin_));
  return point_[static_cast<std::size_t>(hour - origin_ - 1)];
}

std::vector<double> ForecastWindow::scenario_column(Hour hour) const {
  if (kind_ != ForecastKind::Scenario)
    fail(Errc::WrongKind, "expected a scenario forecast window");
  if (!covers(hour))
    fail(Errc::Coverage, "target hour " + std::to_string(hour) +
                             " outside window from origin " +
                             std::to_string(origin_));
  const std::size_t i = static_cast<std::size_t>(hour - origin_ - 1);
  std::vector<double> col;
  col.reserve(scenarios_.size());
  for (const auto& row : scenarios_) col.push_back(row[i]);
  return col;
}

ForecastWindow ForecastWindow::prefix(int k) const {
  if (k < 1 || k > horizon_)
    fail(Errc::InvalidSpec, "prefix length must be in [1, horizon]");
  if (kind_ == ForecastKind::Point) {
    return point(origin_,
                 std::vector<double>(point_.begin(), point_.begin() + k));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(scenarios_.size());
  for (const auto& row : scenarios_)
    rows.emplace_back(row.begin(), row.begin() + k);
  return scenario(origin_, std::move(rows));
}

namespace {

void check_compatible(const ForecastWindow& a, const ForecastWindow& b) {
  if (a.kind() != b.kind())
    fail(Errc::IncompatibleWindow, "windows have different kinds");
  if (a.horizon() != b.horizon())
    fail(Errc::IncompatibleWindow, "windows have different horizons");
  if (a.origin() >= b.origin())
    fail(Errc::IncompatibleWindow,
         "w_prev must have the earlier origin");
}

// Overlapping target range [lo, hi] or an empty pair.
std::pair<Hour, Hour> overlap_bounds(const ForecastWindow& prev,
                                     const ForecastWindow& next) {
  const Hour lo = next.first_target();
  const Hour hi = prev.last_target();
  return {lo, hi};
}

}  // namespace

std::vector<OverlapPoint> overlap_region(const ForecastWindow& w_prev,
                                         const ForecastWindow& w_next) {
  check_compatible(w_prev, w_next);
  if (w_prev.kind() != ForecastKind::Point)
    fail(Errc::WrongKind, "overlap_region expects point windows");
  auto [lo, hi] = overlap_bounds(w_prev, w_next);
  std::vector<OverlapPoint> out;
  for (Hour t = lo; t <= hi; ++t)
    out.push_back({t, w_prev.point_at(t), w_next.point_at(t)});
  return out;
}

std::vector<OverlapColumns> overlap_region_scenario(
    const ForecastWindow& w_prev, const ForecastWindow& w_next) {
  check_compatible(w_prev, w_next);
  if (w_prev.kind() != ForecastKind::Scenario)
    fail(Errc::WrongKind, "overlap_region_scenario expects scenario windows");
  if (w_prev.n_scenarios() != w_next.n_scenarios())
    fail(Errc::IncompatibleWindow, "windows have different scenario counts");
  auto [lo, hi] = overlap_bounds(w_prev, w_next);
  std::vector<OverlapColumns> out;
  for (Hour t = lo; t <= hi; ++t)
    out.push_back({t, w_prev.scenario_column(t), w_next.scenario_column(t)});
  return out;
}

ForecastArchive::ForecastArchive(Hour revision_interval,
                                 std::vector<ForecastWindow> windows)
    : revision_interval_(revision_interval), windows_(std::move(windows)) {
  if (revision_interval_ < 1)
    fail(Errc::InvalidSpec, "revision interval must be >= 1");
  if (windows_.empty()) fail(Errc::InvalidSpec, "archive has no windows");
  horizon_ = windows_.front().horizon();
  kind_ = windows_.front().kind();
  n_scenarios_ = windows_.front().n_scenarios();
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const auto& w = windows_[i];
    if (w.horizon() != horizon_ || w.kind() != kind_ ||
        w.n_scenarios() != n_scenarios_)
      fail(Errc::InvalidSpec,
           "archive windows must share horizon, kind and scenario count");
    if (i > 0 && w.origin() - windows_[i - 1].origin() != revision_interval_)
      fail(Errc::InvalidSpec,
           "archive origins must be evenly spaced by the revision interval");
  }
}

const ForecastWindow& ForecastArchive::newest_at(Hour hour) const {
  const Hour t0 = first_origin();
  if (hour < t0)
    fail(Errc::Coverage, "no forecast window with origin <= hour " +
                             std::to_string(hour));
  const Hour k =
      std::min<Hour>((hour - t0) / revision_interval_,
                     static_cast<Hour>(windows_.size()) - 1);
  return windows_[static_cast<std::size_t>(k)];
}

}  // namespace battsched
