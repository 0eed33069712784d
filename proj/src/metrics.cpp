#include "battsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace battsched::metrics {

namespace {

void require_point(const ForecastWindow& w, const char* op) {
  if (w.kind() != ForecastKind::Point)
    fail(Errc::WrongKind, std::string(op) + " expects a point window");
}

void require_scenario(const ForecastWindow& w, const char* op) {
  if (w.kind() != ForecastKind::Scenario)
    fail(Errc::WrongKind, std::string(op) + " expects a scenario window");
}

// Overlapping target hours [lo, hi], optionally capped to the next window's
// first `span` steps. Throws when the windows do not overlap at all.
std::pair<Hour, Hour> overlap_or_fail(const ForecastWindow& prev,
                                      const ForecastWindow& next, Hour span) {
  if (prev.kind() != next.kind() || prev.horizon() != next.horizon())
    fail(Errc::IncompatibleWindow,
         "windows must share kind and horizon");
  if (prev.origin() >= next.origin())
    fail(Errc::IncompatibleWindow, "w_prev must have the earlier origin");
  Hour lo = next.first_target();
  Hour hi = std::min(prev.last_target(), next.last_target());
  if (span > 0) hi = std::min(hi, next.origin() + span);
  if (lo > hi)
    fail(Errc::NoOverlap, "windows at origins " +
                              std::to_string(prev.origin()) + " and " +
                              std::to_string(next.origin()) +
                              " do not overlap");
  return {lo, hi};
}

double mac_v_impl(const ForecastWindow& prev, const ForecastWindow& next,
                  Hour span) {
  require_point(next, "mac_v");
  auto [lo, hi] = overlap_or_fail(prev, next, span);
  double sum = 0.0;
  for (Hour t = lo; t <= hi; ++t)
    sum += std::abs(next.point_at(t) - prev.point_at(t));
  return sum / static_cast<double>(hi - lo + 1);
}

double emd_v_impl(const ForecastWindow& prev, const ForecastWindow& next,
                  Hour span) {
  require_scenario(next, "emd_v");
  if (prev.kind() == ForecastKind::Scenario &&
      prev.n_scenarios() != next.n_scenarios())
    fail(Errc::SizeMismatch, "windows have different scenario counts");
  auto [lo, hi] = overlap_or_fail(prev, next, span);
  double sum = 0.0;
  for (Hour t = lo; t <= hi; ++t)
    sum += emd_1d(next.scenario_column(t), prev.scenario_column(t));
  return sum / static_cast<double>(hi - lo + 1);
}

// Per-hour energy score values for the first `span` steps.
std::vector<double> energy_score_steps(const ForecastWindow& window,
                                       const TimeSeries& truth, double p,
                                       int span) {
  require_scenario(window, "energy_score");
  if (p < 1.0) fail(Errc::InvalidSpec, "energy score norm order must be >= 1");
  const auto& rows = window.scenario_rows();
  const int n = window.n_scenarios();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(span));
  for (int i = 0; i < span; ++i) {
    const double y = truth.at(window.origin() + 1 + i);
    double spread = 0.0;
    for (int j = 0; j < n; ++j)
      spread += std::pow(std::abs(y - rows[j][i]), p);
    spread /= n;
    double pairwise = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        pairwise += std::pow(std::abs(rows[j][i] - rows[k][i]), p);
    pairwise /= 2.0 * n * n;
    const double inner = spread - pairwise;
    if (inner < 0.0)
      fail(Errc::NumericDomain,
           "energy score inner value negative before taking the root");
    out.push_back(std::pow(inner, 1.0 / p));
  }
  return out;
}

double mae_steps(const ForecastWindow& window, const TimeSeries& truth,
                 int span) {
  require_point(window, "mae");
  const auto& f = window.point_values();
  double sum = 0.0;
  for (int i = 0; i < span; ++i)
    sum += std::abs(truth.at(window.origin() + 1 + i) - f[i]);
  return sum / span;
}

double mac_h_steps(const ForecastWindow& window, int span) {
  require_point(window, "mac_h");
  if (span < 2)
    fail(Errc::UndefinedMetric,
         "mac_h needs a horizon of at least 2 steps");
  const auto& f = window.point_values();
  double sum = 0.0;
  for (int i = 1; i < span; ++i) sum += std::abs(f[i] - f[i - 1]);
  return sum / (span - 1);
}

double emd_h_steps(const ForecastWindow& window, int span) {
  require_scenario(window, "emd_h");
  if (span < 2)
    fail(Errc::UndefinedMetric,
         "emd_h needs a horizon of at least 2 steps");
  double sum = 0.0;
  for (int i = 1; i < span; ++i) {
    const Hour t = window.origin() + 1 + i;
    sum += emd_1d(window.scenario_column(t), window.scenario_column(t - 1));
  }
  return sum / (span - 1);
}

}  // namespace

double mae(const ForecastWindow& window, const TimeSeries& truth) {
  return mae_steps(window, truth, window.horizon());
}

double mac_v(const ForecastWindow& w_prev, const ForecastWindow& w_next) {
  return mac_v_impl(w_prev, w_next, 0);
}

double mac_h(const ForecastWindow& window) {
  return mac_h_steps(window, window.horizon());
}

double emd_1d(std::vector<double> p, std::vector<double> q) {
  if (p.empty() || q.empty())
    fail(Errc::SizeMismatch, "emd_1d needs non-empty sample sets");
  if (p.size() != q.size())
    fail(Errc::SizeMismatch, "emd_1d needs equally sized sample sets");
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum / static_cast<double>(p.size());
}

double emd_v(const ForecastWindow& w_prev, const ForecastWindow& w_next) {
  return emd_v_impl(w_prev, w_next, 0);
}

double emd_h(const ForecastWindow& window) {
  return emd_h_steps(window, window.horizon());
}

double energy_score(const ForecastWindow& window, const TimeSeries& truth,
                    double p) {
  const auto steps = energy_score_steps(window, truth, p, window.horizon());
  double sum = 0.0;
  for (double v : steps) sum += v;
  return sum / static_cast<double>(steps.size());
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    fail(Errc::SizeMismatch, "pearson needs equally long inputs");
  const std::size_t n = xs.size();
  if (n < 2) fail(Errc::InvalidSpec, "pearson needs at least 2 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    fail(Errc::ZeroVariance, "pearson undefined for zero-variance input");
  return sxy / std::sqrt(sxx * syy);
}

const char* archive_metric_name(ArchiveMetric m) {
  switch (m) {
    case ArchiveMetric::Mae: return "mae";
    case ArchiveMetric::MacV: return "mac_v";
    case ArchiveMetric::MacH: return "mac_h";
    case ArchiveMetric::EnergyScore: return "es";
    case ArchiveMetric::EmdV: return "emd_v";
    case ArchiveMetric::EmdH: return "emd_h";
  }
  return "unknown";
}

ArchiveMetric archive_metric_from_name(const std::string& name) {
  if (name == "mae") return ArchiveMetric::Mae;
  if (name == "mac_v") return ArchiveMetric::MacV;
  if (name == "mac_h") return ArchiveMetric::MacH;
  if (name == "es") return ArchiveMetric::EnergyScore;
  if (name == "emd_v") return ArchiveMetric::EmdV;
  if (name == "emd_h") return ArchiveMetric::EmdH;
  fail(Errc::Config, "unknown metric name: " + name);
}

namespace {

bool is_vertical(ArchiveMetric m) {
  return m == ArchiveMetric::MacV || m == ArchiveMetric::EmdV;
}

double archive_metric_impl(const ForecastArchive& archive,
                           const TimeSeries& truth, ArchiveMetric metric,
                           Hour span, double p) {
  const auto& ws = archive.windows();
  if (is_vertical(metric)) {
    if (ws.size() < 2)
      fail(Errc::NoOverlap,
           "vertical metric needs at least two archive windows");
    if (archive.revision_interval() >= archive.horizon())
      fail(Errc::NoOverlap,
           "vertical metric undefined: revision interval >= horizon");
    double sum = 0.0;
    for (std::size_t i = 1; i < ws.size(); ++i) {
      sum += metric == ArchiveMetric::MacV
                 ? mac_v_impl(ws[i - 1], ws[i], span)
                 : emd_v_impl(ws[i - 1], ws[i], span);
    }
    return sum / static_cast<double>(ws.size() - 1);
  }
  const int h = archive.horizon();
  int steps = span > 0 ? static_cast<int>(std::min<Hour>(span, h)) : h;
  double sum = 0.0;
  for (const auto& w : ws) {
    switch (metric) {
      case ArchiveMetric::Mae: sum += mae_steps(w, truth, steps); break;
      case ArchiveMetric::MacH:
        sum += mac_h_steps(w, std::max(steps, 2));
        break;
      case ArchiveMetric::EnergyScore: {
        const auto vals = energy_score_steps(w, truth, p, steps);
        double s = 0.0;
        for (double v : vals) s += v;
        sum += s / static_cast<double>(vals.size());
        break;
      }
      case ArchiveMetric::EmdH: sum += emd_h_steps(w, std::max(steps, 2)); break;
      default: break;
    }
  }
  return sum / static_cast<double>(ws.size());
}

}  // namespace

double archive_metric(const ForecastArchive& archive, const TimeSeries& truth,
                      ArchiveMetric metric, double p) {
  return archive_metric_impl(archive, truth, metric, 0, p);
}

double mac_v_committed(const ForecastWindow& w_prev,
                       const ForecastWindow& w_next, Hour span) {
  if (span < 1) fail(Errc::InvalidSpec, "span must be >= 1");
  return mac_v_impl(w_prev, w_next, span);
}

double emd_v_committed(const ForecastWindow& w_prev,
                       const ForecastWindow& w_next, Hour span) {
  if (span < 1) fail(Errc::InvalidSpec, "span must be >= 1");
  return emd_v_impl(w_prev, w_next, span);
}

double archive_metric_committed(const ForecastArchive& archive,
                                const TimeSeries& truth, ArchiveMetric metric,
                                Hour span, double p) {
  if (span < 1) fail(Errc::InvalidSpec, "span must be >= 1");
  return archive_metric_impl(archive, truth, metric, span, p);
}

}  // namespace battsched::metrics
