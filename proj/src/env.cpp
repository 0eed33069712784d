#include "battsched/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "battsched/rng.hpp"

namespace battsched {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Counted-clip threshold: well above LP solver tolerance, far below any
// meaningful action, so numerical dust is clamped silently.
constexpr double kClipTol = 1e-7;

}  // namespace

void BatterySpec::validate() const {
  if (!(capacity > 0.0)) fail(Errc::InvalidSpec, "battery capacity must be > 0");
  if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= capacity))
    fail(Errc::InvalidSpec,
         "battery needs 0 <= soc_min < soc_max <= capacity");
  if (!(p_max > 0.0)) fail(Errc::InvalidSpec, "battery p_max must be > 0");
  if (!(eta_charge > 0.0 && eta_charge <= 1.0) ||
      !(eta_discharge > 0.0 && eta_discharge <= 1.0))
    fail(Errc::InvalidSpec, "battery efficiencies must lie in (0, 1]");
  if (!(soc_init >= soc_min && soc_init <= soc_max))
    fail(Errc::InvalidSpec, "initial SOC must lie within [soc_min, soc_max]");
}

EnvironmentSeries::EnvironmentSeries(std::vector<Building> buildings,
                                     TimeSeries price, TimeSeries carbon)
    : buildings_(std::move(buildings)),
      price_(std::move(price)),
      carbon_(std::move(carbon)) {
  if (buildings_.empty())
    fail(Errc::InvalidSpec, "environment needs at least one building");
  const Hour s = price_.start();
  const Hour e = price_.end();
  if (carbon_.start() != s || carbon_.end() != e)
    fail(Errc::InvalidSpec, "price and carbon series must be aligned");
  for (const auto& b : buildings_) {
    if (b.load.start() != s || b.load.end() != e || b.pv.start() != s ||
        b.pv.end() != e)
      fail(Errc::InvalidSpec,
           "building series must align with the district series");
    b.battery.validate();
    for (double v : b.load.values())
      if (v < 0.0) fail(Errc::InvalidSpec, "loads must be >= 0");
    for (double v : b.pv.values())
      if (v < 0.0) fail(Errc::InvalidSpec, "pv must be >= 0");
  }
  for (double v : price_.values())
    if (v < 0.0) fail(Errc::InvalidSpec, "prices must be >= 0");
  for (double v : carbon_.values())
    if (v < 0.0) fail(Errc::InvalidSpec, "carbon intensity must be >= 0");
}

double EnvironmentSeries::base_load_at(Hour hour) const {
  double sum = 0.0;
  for (const auto& b : buildings_) sum += b.load.at(hour) - b.pv.at(hour);
  return sum;
}

TimeSeries EnvironmentSeries::district_base() const {
  std::vector<double> vals(price_.size(), 0.0);
  for (const auto& b : buildings_) {
    const auto& lv = b.load.values();
    const auto& pv = b.pv.values();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += lv[i] - pv[i];
  }
  return TimeSeries(start(), std::move(vals));
}

std::vector<double> EnvironmentSeries::initial_soc() const {
  std::vector<double> soc;
  soc.reserve(buildings_.size());
  for (const auto& b : buildings_) soc.push_back(b.battery.soc_init);
  return soc;
}

ExecutionState::ExecutionState(const EnvironmentSeries& env, Hour start,
                               std::vector<double> soc0)
    : env_(&env), start_(start), hour_(start), soc_(std::move(soc0)) {
  if (soc_.size() != env.n_buildings())
    fail(Errc::InvalidSpec, "initial SOC must list one value per building");
  for (std::size_t b = 0; b < soc_.size(); ++b) {
    const auto& spec = env.buildings()[b].battery;
    if (soc_[b] < 0.0)
      fail(Errc::InvalidSpec, "initial SOC must be non-negative");
    if (soc_[b] < spec.soc_min - kClipTol || soc_[b] > spec.soc_max + kClipTol)
      fail(Errc::InvalidSpec, "initial SOC outside [soc_min, soc_max]");
  }
  trace_.soc.resize(soc_.size());
  trace_.actions.resize(soc_.size());
  if (start_ - 1 >= env.start()) {
    trace_.anchor_net_load = env.base_load_at(start_ - 1);
    trace_.has_anchor = true;
  }
}

double ExecutionState::step(const std::vector<double>& desired) {
  if (desired.size() != soc_.size())
    fail(Errc::InvalidSpec, "one action per building required");
  if (hour_ >= env_->end())
    fail(Errc::Coverage, "executing past environment coverage");

  double net = 0.0;
  for (std::size_t b = 0; b < soc_.size(); ++b) {
    const auto& spec = env_->buildings()[b].battery;
    double x = desired[b];
    if (x >= 0.0) {
      // charge: bounded by power and by the SOC headroom
      x = std::min(x, spec.p_max);
      x = std::min(x, (spec.soc_max - soc_[b]) / spec.eta_charge);
      x = std::max(x, 0.0);
    } else {
      // discharge: SOC drops by |x| / eta_discharge
      x = std::max(x, -spec.p_max);
      x = std::max(x, (spec.soc_min - soc_[b]) * spec.eta_discharge);
      x = std::min(x, 0.0);
    }
    if (std::abs(x - desired[b]) > kClipTol) ++trace_.clipped_steps;
    soc_[b] += x >= 0.0 ? spec.eta_charge * x : x / spec.eta_discharge;
    soc_[b] = std::clamp(soc_[b], spec.soc_min, spec.soc_max);
    trace_.soc[b].push_back(soc_[b]);
    trace_.actions[b].push_back(x);
    net += env_->buildings()[b].load.at(hour_) -
           env_->buildings()[b].pv.at(hour_) + x;
  }
  const double price = env_->price().at(hour_);
  const double carbon = env_->carbon().at(hour_);
  trace_.price_cost.push_back(std::max(0.0, net * price));
  trace_.carbon_cost.push_back(std::max(0.0, net * carbon));
  net_loads_.push_back(net);
  ++hour_;
  return net;
}

SimulationTrace ExecutionState::finish() && {
  if (net_loads_.empty())
    fail(Errc::InvalidSpec, "cannot finish an empty execution");
  trace_.net_load = TimeSeries(start_, std::move(net_loads_));
  return std::move(trace_);
}

SimulationTrace execute(const EnvironmentSeries& env, const Plan& plan,
                        const std::vector<double>& soc0) {
  if (plan.actions.size() != env.n_buildings())
    fail(Errc::InvalidSpec, "plan must cover every building");
  const Hour len = plan.length();
  if (len == 0) fail(Errc::InvalidSpec, "plan has no hours");
  for (const auto& a : plan.actions)
    if (static_cast<Hour>(a.size()) != len)
      fail(Errc::InvalidSpec, "plan rows must have equal length");
  if (!env.price().covers(plan.start, len))
    fail(Errc::Coverage, "plan hours not covered by the environment");

  ExecutionState state(env, plan.start, soc0);
  std::vector<double> desired(env.n_buildings());
  for (Hour j = 0; j < len; ++j) {
    for (std::size_t b = 0; b < desired.size(); ++b)
      desired[b] = plan.actions[b][static_cast<std::size_t>(j)];
    state.step(desired);
  }
  return std::move(state).finish();
}

double raw_ramping(const std::vector<double>& net_load) {
  double sum = 0.0;
  for (std::size_t i = 1; i < net_load.size(); ++i)
    sum += std::abs(net_load[i] - net_load[i - 1]);
  return sum;
}

namespace {

double raw_cost(const std::vector<double>& net, const std::vector<double>& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i)
    sum += std::max(0.0, net[i] * w[i]);
  return sum;
}

// Average over months of (monthly mean) / (monthly max) net load.
double load_factor(const std::vector<double>& net) {
  const std::size_t months = net.size() / kScoringMonthHours;
  double sum = 0.0;
  for (std::size_t m = 0; m < months; ++m) {
    const auto first = net.begin() + static_cast<std::ptrdiff_t>(
                                         m * kScoringMonthHours);
    const auto last = first + kScoringMonthHours;
    double total = 0.0, peak = -std::numeric_limits<double>::infinity();
    for (auto it = first; it != last; ++it) {
      total += *it;
      peak = std::max(peak, *it);
    }
    if (!(peak > 0.0))
      fail(Errc::NumericDomain,
           "load factor undefined: non-positive monthly peak net load");
    sum += total / (kScoringMonthHours * peak);
  }
  return sum / static_cast<double>(months);
}

double safe_ratio(double entry, double baseline) {
  if (baseline != 0.0) return entry / baseline;
  if (entry == 0.0) return 1.0;
  fail(Errc::NumericDomain, "KPI ratio undefined: baseline is zero");
}

}  // namespace

KpiReport score(const SimulationTrace& trace, const EnvironmentSeries& env,
                bool include_grid) {
  const Hour start = trace.start();
  const Hour len = trace.length();
  if (!env.price().covers(start, len))
    fail(Errc::Coverage, "trace hours not covered by the environment");
  if (include_grid && len % kScoringMonthHours != 0)
    fail(Errc::Period,
         "grid KPIs need the trace to span whole scoring months of " +
             std::to_string(kScoringMonthHours) + " hours (got " +
             std::to_string(len) + ")");

  const auto price = env.price().slice(start, len);
  const auto carbon = env.carbon().slice(start, len);

  // Zero-action baseline over the same hours.
  std::vector<double> base(static_cast<std::size_t>(len), 0.0);
  for (const auto& b : env.buildings()) {
    const auto lv = b.load.slice(start, len);
    const auto pv = b.pv.slice(start, len);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] += lv[i] - pv[i];
  }

  const auto& entry = trace.net_load.values();

  KpiReport r;
  r.raw_cost_entry = raw_cost(entry, price);
  r.raw_cost_baseline = raw_cost(base, price);
  r.raw_emissions_entry = raw_cost(entry, carbon);
  r.raw_emissions_baseline = raw_cost(base, carbon);
  r.cost_ratio = safe_ratio(r.raw_cost_entry, r.raw_cost_baseline);
  r.emissions_ratio = safe_ratio(r.raw_emissions_entry, r.raw_emissions_baseline);
  r.avg_score = (r.cost_ratio + r.emissions_ratio) / 2.0;

  if (include_grid) {
    r.raw_ramping_entry = raw_ramping(entry);
    r.raw_ramping_baseline = raw_ramping(base);
    r.load_factor_entry = load_factor(entry);
    r.load_factor_baseline = load_factor(base);
    r.ramping_ratio = safe_ratio(*r.raw_ramping_entry, *r.raw_ramping_baseline);
    r.load_factor_ratio =
        safe_ratio(1.0 - *r.load_factor_entry, 1.0 - *r.load_factor_baseline);
    r.grid_score = (*r.ramping_ratio + *r.load_factor_ratio) / 2.0;
    r.avg_score_with_grid =
        (r.cost_ratio + r.emissions_ratio + *r.grid_score) / 3.0;
  }
  return r;
}

double realized_cost(const SimulationTrace& trace,
                     const EnvironmentSeries& env, double beta, double w_co2) {
  const Hour start = trace.start();
  const Hour len = trace.length();
  const auto price = env.price().slice(start, len);
  const auto carbon = env.carbon().slice(start, len);
  const auto& net = trace.net_load.values();
  double cost = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i)
    cost += std::max(0.0, net[i] * (price[i] + w_co2 * carbon[i]));
  if (beta > 0.0) {
    cost += beta * raw_ramping(net);
    if (trace.has_anchor)
      cost += beta * std::abs(net.front() - trace.anchor_net_load);
  }
  return cost;
}

void SyntheticEnvConfig::validate() const {
  if (n_buildings < 1) fail(Errc::Config, "n_buildings must be >= 1");
  if (n_days < 1) fail(Errc::Config, "n_days must be >= 1");
  if (extra_hours < 0) fail(Errc::Config, "extra_hours must be >= 0");
  if (load_base < 0 || load_amp < 0 || load_noise < 0 || pv_peak < 0 ||
      pv_noise < 0 || price_offpeak < 0 || price_peak < 0 || carbon_base < 0 ||
      carbon_amp < 0)
    fail(Errc::Config, "synthetic profile parameters must be >= 0");
  if (peak_start < 0 || peak_end > 24 || peak_start > peak_end)
    fail(Errc::Config, "peak window must satisfy 0 <= start <= end <= 24");
  if (load_peak_hour < 0 || load_peak_hour > 23)
    fail(Errc::Config, "load_peak_hour must lie in [0, 23]");
  battery.validate();
}

EnvironmentSeries make_synthetic_env(const SyntheticEnvConfig& cfg) {
  cfg.validate();
  const Hour raw_hours = static_cast<Hour>(cfg.n_days) * 24;
  const Hour months = (raw_hours + kScoringMonthHours - 1) / kScoringMonthHours;
  const Hour n_hours = months * kScoringMonthHours + cfg.extra_hours;

  std::vector<Building> buildings;
  buildings.reserve(static_cast<std::size_t>(cfg.n_buildings));
  for (int b = 0; b < cfg.n_buildings; ++b) {
    std::vector<double> load(static_cast<std::size_t>(n_hours));
    std::vector<double> pv(static_cast<std::size_t>(n_hours));
    const double phase = 2.0 * kPi * b / std::max(1, cfg.n_buildings) / 6.0;
    for (Hour h = 0; h < n_hours; ++h) {
      const double hod = static_cast<double>(h % 24);
      const double daily =
          std::cos(2.0 * kPi * (hod - cfg.load_peak_hour) / 24.0 - phase);
      const double zl = rng::gaussian_at(rng::combine(
          cfg.seed, 11, static_cast<std::uint64_t>(b),
          static_cast<std::uint64_t>(h)));
      load[static_cast<std::size_t>(h)] =
          std::max(0.0, cfg.load_base + cfg.load_amp * daily +
                            cfg.load_noise * zl);
      double sun = 0.0;
      if (hod >= 6.0 && hod <= 18.0) sun = std::sin(kPi * (hod - 6.0) / 12.0);
      const double zp = rng::gaussian_at(rng::combine(
          cfg.seed, 12, static_cast<std::uint64_t>(b),
          static_cast<std::uint64_t>(h)));
      pv[static_cast<std::size_t>(h)] =
          std::max(0.0, cfg.pv_peak * sun * (1.0 + cfg.pv_noise * zp));
    }
    buildings.push_back(Building{TimeSeries(0, std::move(load)),
                                 TimeSeries(0, std::move(pv)), cfg.battery});
  }

  std::vector<double> price(static_cast<std::size_t>(n_hours));
  std::vector<double> carbon(static_cast<std::size_t>(n_hours));
  for (Hour h = 0; h < n_hours; ++h) {
    const int hod = static_cast<int>(h % 24);
    price[static_cast<std::size_t>(h)] =
        (hod >= cfg.peak_start && hod < cfg.peak_end) ? cfg.price_peak
                                                      : cfg.price_offpeak;
    carbon[static_cast<std::size_t>(h)] = std::max(
        0.0, cfg.carbon_base +
                 cfg.carbon_amp * std::sin(2.0 * kPi * (hod - 14.0) / 24.0));
  }

  return EnvironmentSeries(std::move(buildings), TimeSeries(0, std::move(price)),
                           TimeSeries(0, std::move(carbon)));
}

}  // namespace battsched
