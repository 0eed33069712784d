#include "battsched/policies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "battsched/metrics.hpp"

namespace battsched {

namespace {

// Scenario base-load rows for hours epoch+1 .. epoch+h_eff taken from a
// window whose origin may be up to v_f-1 hours older than the epoch.
std::vector<std::vector<double>> window_base_rows(const ForecastWindow& w,
                                                  Hour epoch, int h_eff) {
  const int offset = static_cast<int>(epoch - w.origin());  // staleness
  std::vector<std::vector<double>> rows;
  if (w.kind() == ForecastKind::Point) {
    const auto& v = w.point_values();
    rows.emplace_back(v.begin() + offset, v.begin() + offset + h_eff);
  } else {
    for (const auto& r : w.scenario_rows())
      rows.emplace_back(r.begin() + offset, r.begin() + offset + h_eff);
  }
  return rows;
}

LookaheadProblem make_problem(const EnvironmentSeries& env,
                              const ForecastWindow& window, Hour epoch,
                              int h_eff, const std::vector<double>& soc,
                              double prev_net_load, const PolicyConfig& cfg) {
  LookaheadProblem pb;
  pb.origin = epoch;
  pb.horizon = h_eff;
  for (const auto& b : env.buildings()) pb.batteries.push_back(b.battery);
  pb.soc0 = soc;
  pb.base_scenarios = window_base_rows(window, epoch, h_eff);
  pb.price = env.price().slice(epoch + 1, h_eff);
  pb.carbon = env.carbon().slice(epoch + 1, h_eff);
  pb.w_co2 = cfg.w_co2;
  pb.beta = cfg.beta;
  pb.prev_net_load = prev_net_load;
  return pb;
}

LpSolution solve_or_fail(const LookaheadProblem& pb, double tol,
                         PolicyRunStats* stats) {
  LpSolution sol = solve_lookahead(pb, tol);
  if (stats) stats->lp_iterations += sol.iterations;
  if (sol.status != LpSolution::Status::Optimal)
    fail(Errc::SolverLimit,
         "lookahead solve failed at epoch " + std::to_string(pb.origin));
  if (sol.max_violation > 1e-6)
    fail(Errc::SolverLimit,
         "lookahead solution violates constraints at epoch " +
             std::to_string(pb.origin));
  return sol;
}

}  // namespace

void PolicyConfig::validate() const {
  if (v_f < 1 || v_o < 1) fail(Errc::Config, "commitments must be >= 1");
  if (v_o > v_f)
    fail(Errc::Config,
         "optimization commitment must not exceed the forecast commitment");
  if (v_f > horizon)
    fail(Errc::Config, "forecast commitment must not exceed the horizon");
  if (horizon < 1) fail(Errc::Config, "horizon must be >= 1");
  if (beta < 0.0) fail(Errc::Config, "beta must be >= 0");
  if (w_co2 < 0.0) fail(Errc::Config, "w_co2 must be >= 0");
}

SimulationTrace run_fhc(const EnvironmentSeries& env,
                        const ForecastArchive& archive,
                        const PolicyConfig& cfg, Hour n_hours,
                        PolicyRunStats* stats) {
  cfg.validate();
  if (archive.revision_interval() != cfg.v_f)
    fail(Errc::Coverage,
         "archive revision interval does not match the policy's v_f");
  if (archive.horizon() != cfg.horizon)
    fail(Errc::Coverage, "archive horizon does not match the policy horizon");
  if (n_hours < 1) fail(Errc::InvalidSpec, "n_hours must be >= 1");

  const Hour t0 = archive.first_origin();
  if (t0 < env.start() || t0 + n_hours >= env.end())
    fail(Errc::Coverage,
         "environment does not cover the evaluation period plus the anchor "
         "hour");

  ExecutionState state(env, t0 + 1, env.initial_soc());
  double prev_net = env.base_load_at(t0);
  std::vector<double> desired(env.n_buildings());

  Hour epoch = t0;
  while (epoch < t0 + n_hours) {
    const ForecastWindow& window = archive.newest_at(epoch);
    const int stale = static_cast<int>(epoch - window.origin());
    const int h_eff = static_cast<int>(
        std::min<Hour>(cfg.horizon - stale, t0 + n_hours - epoch));
    if (h_eff < 1)
      fail(Errc::Coverage, "no usable forecast steps at epoch " +
                               std::to_string(epoch));
    if (stats) stats->solve_epochs.push_back(epoch);

    const LookaheadProblem pb = make_problem(env, window, epoch, h_eff,
                                             state.soc(), prev_net, cfg);
    const LpSolution sol = solve_or_fail(pb, cfg.lp_tol, stats);

    const Hour commit = std::min<Hour>(cfg.v_o, h_eff);
    for (Hour j = 0; j < commit; ++j) {
      for (std::size_t b = 0; b < desired.size(); ++b)
        desired[b] = sol.action(b, static_cast<std::size_t>(j));
      prev_net = state.step(desired);
    }
    epoch += commit;
  }
  SimulationTrace trace = std::move(state).finish();
  if (stats) stats->clipped_steps = trace.clipped_steps;
  return trace;
}

AfhcResult run_afhc(const EnvironmentSeries& env,
                    const ForecastArchive& archive, const PolicyConfig& cfg,
                    Hour n_hours) {
  cfg.validate();
  if (cfg.v_f != cfg.v_o)
    fail(Errc::Config, "averaging FHC requires v_f == v_o");
  if (archive.revision_interval() != cfg.v_f)
    fail(Errc::Coverage,
         "archive revision interval does not match the policy's v_f");
  if (archive.horizon() != cfg.horizon)
    fail(Errc::Coverage, "archive horizon does not match the policy horizon");
  if (n_hours < 1) fail(Errc::InvalidSpec, "n_hours must be >= 1");

  const Hour v = cfg.v_f;
  const Hour t0 = archive.first_origin();
  if (t0 < env.start() || t0 + n_hours >= env.end())
    fail(Errc::Coverage,
         "environment does not cover the evaluation period plus the anchor "
         "hour");

  struct Phase {
    Hour next_epoch = 0;
    std::vector<double> soc;         // its own predicted state
    double prev_net = 0.0;           // its own predicted net load
    Hour plan_start = 0;             // first hour covered by current plan
    std::vector<std::vector<double>> plan;  // [building][hour offset]
    std::vector<std::vector<double>> full_actions;  // entire stream
  };

  const std::size_t n_b = env.n_buildings();
  std::vector<Phase> phases(static_cast<std::size_t>(v));
  for (Hour k = 0; k < v; ++k) {
    auto& ph = phases[static_cast<std::size_t>(k)];
    ph.next_epoch = t0 + k;
    ph.soc = env.initial_soc();
    ph.prev_net = env.base_load_at(t0);  // district base before any action
    ph.full_actions.assign(n_b, {});
  }

  ExecutionState state(env, t0 + 1, env.initial_soc());
  std::vector<double> averaged(n_b);

  for (Hour h = t0 + 1; h <= t0 + n_hours; ++h) {
    for (auto& ph : phases) {
      if (h - 1 != ph.next_epoch || ph.next_epoch >= t0 + n_hours) continue;
      const Hour epoch = ph.next_epoch;
      const ForecastWindow& window = archive.newest_at(epoch);
      const int stale = static_cast<int>(epoch - window.origin());
      const int h_eff = static_cast<int>(
          std::min<Hour>(cfg.horizon - stale, t0 + n_hours - epoch));
      const LookaheadProblem pb = make_problem(env, window, epoch, h_eff,
                                               ph.soc, ph.prev_net, cfg);
      const LpSolution sol = solve_or_fail(pb, cfg.lp_tol, nullptr);
      const Hour commit = std::min<Hour>(v, h_eff);
      ph.plan_start = epoch + 1;
      ph.plan.assign(n_b, {});
      for (std::size_t b = 0; b < n_b; ++b) {
        ph.plan[b].resize(static_cast<std::size_t>(commit));
        for (Hour j = 0; j < commit; ++j)
          ph.plan[b][static_cast<std::size_t>(j)] =
              sol.action(b, static_cast<std::size_t>(j));
      }
      ph.next_epoch = epoch + commit;
    }

    // Average the planned actions; phases without a plan contribute zero.
    std::fill(averaged.begin(), averaged.end(), 0.0);
    for (auto& ph : phases) {
      if (ph.plan.empty() || h < ph.plan_start) {
        // Phase not started: it idles, so its own predicted net load is the
        // plain base load.
        for (std::size_t b = 0; b < n_b; ++b) ph.full_actions[b].push_back(0.0);
        ph.prev_net = env.base_load_at(h);
        continue;
      }
      const std::size_t off = static_cast<std::size_t>(h - ph.plan_start);
      double base_net = env.base_load_at(h);
      for (std::size_t b = 0; b < n_b; ++b) {
        const double a = ph.plan[b][off];
        averaged[b] += a;
        ph.full_actions[b].push_back(a);
        base_net += a;
      }
      // Advance the phase's own predicted state along its plan.
      for (std::size_t b = 0; b < n_b; ++b) {
        const auto& spec = env.buildings()[b].battery;
        const double a = ph.plan[b][off];
        ph.soc[b] += a >= 0.0 ? spec.eta_charge * a : a / spec.eta_discharge;
        ph.soc[b] = std::clamp(ph.soc[b], spec.soc_min, spec.soc_max);
      }
      ph.prev_net = base_net;
    }
    const double inv_v = 1.0 / static_cast<double>(v);
    for (std::size_t b = 0; b < n_b; ++b) averaged[b] *= inv_v;
    state.step(averaged);
  }

  AfhcResult out;
  out.trace = std::move(state).finish();
  out.phase_traces.reserve(phases.size());
  for (auto& ph : phases) {
    Plan plan;
    plan.start = t0 + 1;
    plan.actions = std::move(ph.full_actions);
    out.phase_traces.push_back(execute(env, plan, env.initial_soc()));
  }
  return out;
}

void DecisionGridConfig::validate() const {
  if (v_max < 1) fail(Errc::Config, "v_max must be >= 1");
  if (v_max >= horizon)
    fail(Errc::Config,
         "v_max must be below the horizon (vertical stability needs "
         "overlapping windows)");
  if (n_hours < 1) fail(Errc::Config, "n_hours must be >= 1");
  if (horizon < 1) fail(Errc::Config, "horizon must be >= 1");
  if (stochastic) scenario_cfg.validate();
}

GridCell run_grid_cell(const EnvironmentSeries& env, const TimeSeries& truth,
                       const ForecastArchive& archive,
                       const ForecastArchive* scen_archive, Hour v_f, Hour v_o,
                       const DecisionGridConfig& cfg) {
  using metrics::ArchiveMetric;
  GridCell cell;
  cell.v_f = v_f;
  cell.v_o = v_o;

  PolicyConfig pc;
  pc.algorithm = PolicyConfig::Algorithm::Fhc;
  pc.v_f = v_f;
  pc.v_o = v_o;
  pc.horizon = cfg.horizon;
  pc.beta = cfg.beta;
  pc.w_co2 = cfg.w_co2;
  pc.lp_tol = cfg.lp_tol;

  PolicyRunStats stats;
  const SimulationTrace trace = run_fhc(env, archive, pc, cfg.n_hours, &stats);
  cell.kpis = score(trace, env, cfg.include_grid_kpis);
  cell.clipped_steps = stats.clipped_steps;

  cell.mae = metrics::archive_metric_committed(archive, truth,
                                               ArchiveMetric::Mae, v_f);
  cell.mac_v = metrics::archive_metric_committed(archive, truth,
                                                 ArchiveMetric::MacV, v_f);
  cell.mac_h = metrics::archive_metric_committed(archive, truth,
                                                 ArchiveMetric::MacH, v_f);
  cell.mae_full = metrics::archive_metric(archive, truth, ArchiveMetric::Mae);
  cell.mac_v_full =
      metrics::archive_metric(archive, truth, ArchiveMetric::MacV);
  cell.mac_h_full =
      metrics::archive_metric(archive, truth, ArchiveMetric::MacH);

  if (cfg.stochastic) {
    if (!scen_archive)
      fail(Errc::Config, "stochastic grid cell needs a scenario archive");
    const SimulationTrace st =
        run_fhc(env, *scen_archive, pc, cfg.n_hours, nullptr);
    cell.kpis_stochastic = score(st, env, cfg.include_grid_kpis);
    cell.es = metrics::archive_metric_committed(
        *scen_archive, truth, ArchiveMetric::EnergyScore, v_f);
    cell.emd_v = metrics::archive_metric_committed(*scen_archive, truth,
                                                   ArchiveMetric::EmdV, v_f);
    cell.emd_h = metrics::archive_metric_committed(*scen_archive, truth,
                                                   ArchiveMetric::EmdH, v_f);
  }
  return cell;
}

void parallel_for_indexed(std::size_t n, int workers,
                          const std::function<void(std::size_t)>& fn) {
  std::size_t n_threads = workers > 0
                              ? static_cast<std::size_t>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, n);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<GridCell> run_decision_grid(const EnvironmentSeries& env,
                                        const TimeSeries& truth,
                                        const NoiseModel& noise,
                                        const DecisionGridConfig& cfg) {
  cfg.validate();
  // Archives are generated once per row and shared by that row's cells.
  std::vector<ForecastArchive> archives;
  std::vector<std::optional<ForecastArchive>> scen_archives(
      static_cast<std::size_t>(cfg.v_max));
  archives.reserve(static_cast<std::size_t>(cfg.v_max));
  for (Hour v_f = 1; v_f <= cfg.v_max; ++v_f) {
    archives.push_back(generate_point_archive(truth, cfg.horizon, v_f, noise));
    if (cfg.stochastic)
      scen_archives[static_cast<std::size_t>(v_f - 1)] =
          generate_scenario_archive(archives.back(), cfg.scenario_cfg);
  }

  std::vector<std::pair<Hour, Hour>> tasks;
  for (Hour v_f = 1; v_f <= cfg.v_max; ++v_f)
    for (Hour v_o = 1; v_o <= v_f; ++v_o) tasks.push_back({v_f, v_o});

  std::vector<GridCell> cells(tasks.size());
  parallel_for_indexed(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto [v_f, v_o] = tasks[i];
    const auto& archive = archives[static_cast<std::size_t>(v_f - 1)];
    const auto& scen = scen_archives[static_cast<std::size_t>(v_f - 1)];
    cells[i] = run_grid_cell(env, truth, archive, scen ? &*scen : nullptr,
                             v_f, v_o, cfg);
  });
  return cells;
}

}  // namespace battsched
