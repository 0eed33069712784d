#include "battsched/forecast.hpp"

#include <cmath>

#include "battsched/rng.hpp"

namespace battsched {

namespace {

// Domain tags keep the counter-based streams of the different noise kinds
// disjoint even under identical seeds.
constexpr std::uint64_t kTagIid = 1;
constexpr std::uint64_t kTagInnovation = 2;
constexpr std::uint64_t kTagScenario = 3;

}  // namespace

void NoiseModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    fail(Errc::Config, "noise sigma must be finite and >= 0");
  if (kind == Kind::ExpDecay) {
    if (!(a >= 0.0 && a < 1.0))
      fail(Errc::Config, "noise decay rate a must lie in [0, 1)");
    if (!(c > 0.0) || !std::isfinite(c))
      fail(Errc::Config, "noise correlation magnitude c must be > 0");
  }
}

void ScenarioGenConfig::validate() const {
  if (n_scenarios < 1) fail(Errc::Config, "scenario count must be >= 1");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    fail(Errc::Config, "scenario noise scale must be finite and >= 0");
}

ForecastArchive generate_point_archive(const TimeSeries& truth, int horizon,
                                       Hour interval, const NoiseModel& model) {
  model.validate();
  if (horizon < 1) fail(Errc::InvalidSpec, "horizon must be >= 1");
  if (interval < 1) fail(Errc::InvalidSpec, "revision interval must be >= 1");
  if (static_cast<Hour>(truth.size()) < horizon + 1)
    fail(Errc::Coverage,
         "truth series too short for one full forecast window (needs horizon "
         "+ 1 hours)");

  const Hour t0 = truth.start();
  const Hour last_origin =
      t0 + interval * ((static_cast<Hour>(truth.size()) - 1 - horizon) /
                       interval);

  std::vector<ForecastWindow> windows;
  windows.reserve(static_cast<std::size_t>((last_origin - t0) / interval) + 1);

  for (Hour t = t0; t <= last_origin; t += interval) {
    std::vector<double> values(static_cast<std::size_t>(horizon));
    if (model.sigma == 0.0) {
      values = truth.slice(t + 1, horizon);
    } else if (model.kind == NoiseModel::Kind::Iid) {
      for (int i = 1; i <= horizon; ++i) {
        const double z = rng::gaussian_at(rng::combine(
            model.seed, kTagIid, static_cast<std::uint64_t>(t),
            static_cast<std::uint64_t>(i)));
        values[static_cast<std::size_t>(i - 1)] =
            truth.at(t + i) + model.sigma * z;
      }
    } else {
      for (int i = 1; i <= horizon; ++i) {
        const Hour tau = t + i;
        double eps = 0.0;
        double decay = 1.0;
        for (int s = 0; s < i; ++s) {
          const double innovation =
              model.sigma *
              rng::gaussian_at(rng::combine(
                  model.seed, kTagInnovation,
                  static_cast<std::uint64_t>(tau - s)));
          eps += model.c * decay * innovation;
          decay *= model.a;
        }
        values[static_cast<std::size_t>(i - 1)] = truth.at(tau) + eps;
      }
    }
    windows.push_back(ForecastWindow::point(t, std::move(values)));
  }
  return ForecastArchive(interval, std::move(windows));
}

ForecastArchive generate_scenario_archive(const ForecastArchive& point,
                                          const ScenarioGenConfig& cfg) {
  cfg.validate();
  if (point.kind() != ForecastKind::Point)
    fail(Errc::WrongKind,
         "scenario generation needs a point archive as input");

  const int h = point.horizon();
  std::vector<ForecastWindow> windows;
  windows.reserve(point.windows().size());
  for (const auto& w : point.windows()) {
    const auto& base = w.point_values();
    std::vector<std::vector<double>> rows(
        static_cast<std::size_t>(cfg.n_scenarios));
    for (int j = 0; j < cfg.n_scenarios; ++j) {
      auto& row = rows[static_cast<std::size_t>(j)];
      row.resize(static_cast<std::size_t>(h));
      for (int i = 0; i < h; ++i) {
        const double z = rng::gaussian_at(rng::combine(
            rng::combine(cfg.seed, kTagScenario,
                         static_cast<std::uint64_t>(w.origin())),
            static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
        row[static_cast<std::size_t>(i)] =
            base[static_cast<std::size_t>(i)] * (1.0 + cfg.noise_scale * z);
      }
    }
    windows.push_back(ForecastWindow::scenario(w.origin(), std::move(rows)));
  }
  return ForecastArchive(point.revision_interval(), std::move(windows));
}

double sigma_for_target_mae(double target_mae, double a, double c,
                            int horizon) {
  if (!(target_mae >= 0.0))
    fail(Errc::Config, "target MAE must be >= 0");
  if (!(a >= 0.0 && a < 1.0) || !(c > 0.0) || horizon < 1)
    fail(Errc::Config, "invalid exp_decay parameters");
  // E|eps_i| = sqrt(2/pi) * c * sigma * sqrt((1 - a^(2i)) / (1 - a^2));
  // the full-window MAE averages this over i = 1..H.
  double factor = 0.0;
  const double a2 = a * a;
  double a2i = 1.0;
  for (int i = 1; i <= horizon; ++i) {
    a2i *= a2;
    factor += std::sqrt((1.0 - a2i) / (1.0 - a2));
  }
  factor *= std::sqrt(2.0 / 3.14159265358979323846) * c / horizon;
  return target_mae / factor;
}

}  // namespace battsched
