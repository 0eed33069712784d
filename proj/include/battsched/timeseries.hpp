#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "battsched/errors.hpp"

namespace battsched {

using Hour = long long;

// Absolutely indexed hourly series. The value for hour t is retrievable iff
// start <= t < start + size(). Values are immutable after construction.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(Hour start, std::vector<double> values);

  Hour start() const { return start_; }
  Hour end() const { return start_ + static_cast<Hour>(values_.size()); }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  bool covers(Hour from, Hour len) const {
    return from >= start_ && from + len <= end();
  }

  double at(Hour hour) const;

  // The len values starting at absolute hour `from`.
  std::vector<double> slice(Hour from, Hour len) const;

  double mean() const;

 private:
  Hour start_ = 0;
  std::vector<double> values_;
};

enum class ForecastKind { Point, Scenario };

inline const char* forecast_kind_name(ForecastKind k) {
  return k == ForecastKind::Point ? "point" : "scenario";
}

// One rolling-origin forecast issued at `origin`: the window predicts hours
// origin+1 ... origin+horizon. The origin hour itself is observed, never
// forecast. Point windows carry one value per step; scenario windows carry
// an N x horizon matrix (one row per scenario).
class ForecastWindow {
 public:
  static ForecastWindow point(Hour origin, std::vector<double> values);
  static ForecastWindow scenario(Hour origin,
                                 std::vector<std::vector<double>> rows);

  ForecastKind kind() const { return kind_; }
  Hour origin() const { return origin_; }
  int horizon() const { return horizon_; }
  int n_scenarios() const {
    return kind_ == ForecastKind::Point
               ? 1
               : static_cast<int>(scenarios_.size());
  }

  Hour first_target() const { return origin_ + 1; }
  Hour last_target() const { return origin_ + horizon_; }
  bool covers(Hour hour) const {
    return hour >= first_target() && hour <= last_target();
  }

  const std::vector<double>& point_values() const;
  const std::vector<std::vector<double>>& scenario_rows() const;

  // Point value for absolute target hour.
  double point_at(Hour hour) const;
  // All scenario values for absolute target hour (N entries).
  std::vector<double> scenario_column(Hour hour) const;

  // The window truncated to its first k steps (same origin).
  ForecastWindow prefix(int k) const;

 private:
  ForecastWindow() = default;
  ForecastKind kind_ = ForecastKind::Point;
  Hour origin_ = 0;
  int horizon_ = 0;
  std::vector<double> point_;
  std::vector<std::vector<double>> scenarios_;
};

struct OverlapPoint {
  Hour hour;
  double prev;
  double next;
};

struct OverlapColumns {
  Hour hour;
  std::vector<double> prev;
  std::vector<double> next;
};

// Target hours covered by both windows, with the pair of values each window
// assigns to them. Empty when the origin spacing is >= the horizon.
std::vector<OverlapPoint> overlap_region(const ForecastWindow& w_prev,
                                         const ForecastWindow& w_next);
std::vector<OverlapColumns> overlap_region_scenario(
    const ForecastWindow& w_prev, const ForecastWindow& w_next);

// Rolling-origin archive: windows at origins t0, t0+v, t0+2v, ... all sharing
// one horizon, kind and (for scenario archives) scenario count.
class ForecastArchive {
 public:
  ForecastArchive() = default;
  ForecastArchive(Hour revision_interval, std::vector<ForecastWindow> windows);

  int horizon() const { return horizon_; }
  Hour revision_interval() const { return revision_interval_; }
  ForecastKind kind() const { return kind_; }
  int n_scenarios() const { return n_scenarios_; }
  const std::vector<ForecastWindow>& windows() const { return windows_; }
  Hour first_origin() const { return windows_.front().origin(); }
  Hour last_origin() const { return windows_.back().origin(); }

  // Newest window with origin <= hour.
  const ForecastWindow& newest_at(Hour hour) const;

 private:
  Hour revision_interval_ = 1;
  int horizon_ = 0;
  ForecastKind kind_ = ForecastKind::Point;
  int n_scenarios_ = 1;
  std::vector<ForecastWindow> windows_;
};

}  // namespace battsched
