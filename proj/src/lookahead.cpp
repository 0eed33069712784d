#include "battsched/lookahead.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace battsched {

void LookaheadProblem::validate() const {
  if (horizon < 1) fail(Errc::InvalidSpec, "lookahead horizon must be >= 1");
  if (batteries.empty()) fail(Errc::InvalidSpec, "lookahead needs batteries");
  if (soc0.size() != batteries.size())
    fail(Errc::InvalidSpec, "soc0 must list one value per battery");
  for (std::size_t b = 0; b < batteries.size(); ++b) {
    batteries[b].validate();
    if (soc0[b] < batteries[b].soc_min - 1e-9 ||
        soc0[b] > batteries[b].soc_max + 1e-9)
      fail(Errc::InvalidSpec, "soc0 outside battery SOC bounds");
  }
  if (base_scenarios.empty())
    fail(Errc::InvalidSpec, "lookahead needs at least one scenario");
  for (const auto& row : base_scenarios)
    if (static_cast<int>(row.size()) != horizon)
      fail(Errc::InvalidSpec, "scenario rows must have `horizon` values");
  if (static_cast<int>(price.size()) != horizon ||
      static_cast<int>(carbon.size()) != horizon)
    fail(Errc::InvalidSpec, "price and carbon must have `horizon` values");
  if (beta < 0.0) fail(Errc::InvalidSpec, "beta must be >= 0");
  if (w_co2 < 0.0) fail(Errc::InvalidSpec, "w_co2 must be >= 0");
}

LookaheadLp build_lp(const LookaheadProblem& pb) {
  pb.validate();
  const int H = pb.horizon;
  const int B = static_cast<int>(pb.batteries.size());
  const int N = pb.n_scenarios();
  const double W = 1.0 / N;
  const bool ramp = pb.beta > 0.0;
  const bool anchored = pb.prev_net_load.has_value();

  LookaheadLp out;
  out.n_buildings = B;
  out.horizon = H;
  out.n_scenarios = N;
  out.has_anchor_ramp = anchored;
  lp::Problem& lp = out.lp;

  // Variables: per building x_pos then x_discharge magnitudes, then SOC
  // paths, then per scenario the cost auxiliaries u and ramp auxiliaries s.
  // The tie-break cost keeps the solver off degenerate vertices with
  // simultaneous charge and discharge, whose signed-action execution would
  // drift from the planned SOC path. It must exceed the solver's pricing
  // tolerance to be visible.
  constexpr double kTieBreak = 1e-7;
  for (int b = 0; b < B; ++b) {
    const auto& spec = pb.batteries[static_cast<std::size_t>(b)];
    for (int h = 0; h < H; ++h) lp.add_var(kTieBreak, 0.0, spec.p_max);
    for (int h = 0; h < H; ++h) lp.add_var(kTieBreak, 0.0, spec.p_max);
  }
  for (int b = 0; b < B; ++b) {
    const auto& spec = pb.batteries[static_cast<std::size_t>(b)];
    for (int h = 0; h < H; ++h) lp.add_var(0.0, spec.soc_min, spec.soc_max);
  }
  std::vector<int> u_idx(static_cast<std::size_t>(N) * H);
  for (int i = 0; i < N; ++i)
    for (int h = 0; h < H; ++h)
      u_idx[static_cast<std::size_t>(i * H + h)] =
          lp.add_var(W, 0.0, std::numeric_limits<double>::infinity());
  const int s_first_h = anchored ? 0 : 1;  // 0-based first hour with a ramp term
  std::vector<int> s_idx;
  if (ramp) {
    s_idx.resize(static_cast<std::size_t>(N) * H, -1);
    for (int i = 0; i < N; ++i)
      for (int h = s_first_h; h < H; ++h)
        s_idx[static_cast<std::size_t>(i * H + h)] =
            lp.add_var(W * pb.beta, 0.0,
                       std::numeric_limits<double>::infinity());
  }

  std::vector<int> crash;

  // SOC recursion (equalities): soc_h - soc_{h-1} - eta_c*xp_h + d_h/eta_d = 0,
  // with soc_0 the constant initial state.
  for (int b = 0; b < B; ++b) {
    const auto& spec = pb.batteries[static_cast<std::size_t>(b)];
    for (int h = 0; h < H; ++h) {
      lp::Row row;
      row.sense = lp::Sense::Eq;
      row.coeffs.push_back({out.soc(b, h), 1.0});
      if (h > 0) row.coeffs.push_back({out.soc(b, h - 1), -1.0});
      row.coeffs.push_back({out.xp(b, h), -spec.eta_charge});
      row.coeffs.push_back({out.xd(b, h), 1.0 / spec.eta_discharge});
      row.rhs = h == 0 ? pb.soc0[static_cast<std::size_t>(b)] : 0.0;
      lp.add_row(std::move(row));
      crash.push_back(out.soc(b, h));
    }
  }

  // Cost linearization: u_{i,h} >= k_h * e_{i,h} with
  // e_{i,h} = base_{i,h} + sum_b (xp - d); k_h >= 0 makes the bound exact at
  // the optimum since u carries positive weight.
  for (int i = 0; i < N; ++i) {
    const auto& base = pb.base_scenarios[static_cast<std::size_t>(i)];
    for (int h = 0; h < H; ++h) {
      const double k = pb.price[static_cast<std::size_t>(h)] +
                       pb.w_co2 * pb.carbon[static_cast<std::size_t>(h)];
      const double rhs = k * base[static_cast<std::size_t>(h)];
      const int u = u_idx[static_cast<std::size_t>(i * H + h)];
      lp::Row row;
      row.sense = lp::Sense::Ge;
      row.coeffs.push_back({u, 1.0});
      for (int b = 0; b < B; ++b) {
        row.coeffs.push_back({out.xp(b, h), -k});
        row.coeffs.push_back({out.xd(b, h), k});
      }
      row.rhs = rhs;
      lp.add_row(std::move(row));
      // u basic in its own row at the zero-action point when that is feasible
      crash.push_back(rhs >= 0.0 ? u : -1);
    }
  }

  // Ramp linearization: s_{i,h} >= +/-(e_{i,h} - e_{i,h-1}); the first hour
  // anchors to the executed net load when available.
  if (ramp) {
    for (int i = 0; i < N; ++i) {
      const auto& base = pb.base_scenarios[static_cast<std::size_t>(i)];
      for (int h = s_first_h; h < H; ++h) {
        const double dbase =
            h == 0 ? base[0] - *pb.prev_net_load
                   : base[static_cast<std::size_t>(h)] -
                         base[static_cast<std::size_t>(h - 1)];
        const int s = s_idx[static_cast<std::size_t>(i * H + h)];
        for (int sign = 0; sign < 2; ++sign) {
          const double f = sign == 0 ? 1.0 : -1.0;  // + : s >= e_h - e_{h-1}
          lp::Row row;
          row.sense = lp::Sense::Ge;
          row.coeffs.push_back({s, 1.0});
          for (int b = 0; b < B; ++b) {
            row.coeffs.push_back({out.xp(b, h), -f});
            row.coeffs.push_back({out.xd(b, h), f});
            if (h > 0) {
              row.coeffs.push_back({out.xp(b, h - 1), f});
              row.coeffs.push_back({out.xd(b, h - 1), -f});
            }
          }
          row.rhs = f * dbase;
          lp.add_row(std::move(row));
          // s basic in the binding row at the zero-action point
          crash.push_back((f * dbase >= 0.0) ? s : -1);
        }
      }
    }
  }

  lp.crash_basis = std::move(crash);
  return out;
}

LpSolution solve_lp(const LookaheadLp& built, double tol) {
  lp::Options opts;
  opts.tol = tol;
  const lp::Solution raw = lp::solve(built.lp, opts);

  LpSolution sol;
  switch (raw.status) {
    case lp::Status::Optimal: sol.status = LpSolution::Status::Optimal; break;
    case lp::Status::Infeasible:
      sol.status = LpSolution::Status::Infeasible;
      break;
    case lp::Status::IterationLimit:
      sol.status = LpSolution::Status::IterationLimit;
      break;
    case lp::Status::Unbounded:
      fail(Errc::SolverLimit,
           "lookahead LP reported unbounded; construction violated");
  }
  sol.objective = raw.objective;
  sol.iterations = raw.iterations;
  sol.max_violation = raw.max_violation;
  const int B = built.n_buildings;
  const int H = built.horizon;
  sol.x_pos.assign(static_cast<std::size_t>(B),
                   std::vector<double>(static_cast<std::size_t>(H), 0.0));
  sol.x_neg = sol.x_pos;
  for (int b = 0; b < B; ++b)
    for (int h = 0; h < H; ++h) {
      double xp = raw.x[static_cast<std::size_t>(built.xp(b, h))];
      double xd = raw.x[static_cast<std::size_t>(built.xd(b, h))];
      // net out rounding-level simultaneous charge/discharge
      const double both = std::min(xp, xd);
      if (both > 0.0) {
        xp -= both;
        xd -= both;
      }
      sol.x_pos[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)] = xp;
      sol.x_neg[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)] = -xd;
    }
  return sol;
}

// Expected cost of the netted action sequence under the problem's scenarios;
// this matches the LP objective at the optimum but excludes the tie-break
// term, so it is directly comparable with realized costs.
double lookahead_cost_of_actions(const LookaheadProblem& pb,
                                 const LpSolution& sol) {
  const int H = pb.horizon;
  const int B = static_cast<int>(pb.batteries.size());
  const int N = pb.n_scenarios();
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto& base = pb.base_scenarios[static_cast<std::size_t>(i)];
    double cost = 0.0;
    double prev = pb.prev_net_load.value_or(0.0);
    for (int h = 0; h < H; ++h) {
      double e = base[static_cast<std::size_t>(h)];
      for (int b = 0; b < B; ++b)
        e += sol.action(static_cast<std::size_t>(b),
                        static_cast<std::size_t>(h));
      const double k = pb.price[static_cast<std::size_t>(h)] +
                       pb.w_co2 * pb.carbon[static_cast<std::size_t>(h)];
      cost += std::max(0.0, k * e);
      if (pb.beta > 0.0 && (h > 0 || pb.prev_net_load))
        cost += pb.beta * std::abs(e - prev);
      prev = e;
    }
    total += cost;
  }
  return total / N;
}

LpSolution solve_lookahead(const LookaheadProblem& problem, double tol) {
  LpSolution sol = solve_lp(build_lp(problem), tol);
  if (sol.status == LpSolution::Status::Optimal)
    sol.objective = lookahead_cost_of_actions(problem, sol);
  return sol;
}

Plan plan_from_solution(const LookaheadProblem& problem, const LpSolution& sol,
                        int commit_v) {
  if (commit_v < 1 || commit_v > problem.horizon)
    fail(Errc::Commitment,
         "commitment must lie in [1, horizon]; got " + std::to_string(commit_v));
  Plan plan;
  plan.start = problem.origin + 1;
  plan.actions.resize(problem.batteries.size());
  for (std::size_t b = 0; b < problem.batteries.size(); ++b) {
    plan.actions[b].resize(static_cast<std::size_t>(commit_v));
    for (int h = 0; h < commit_v; ++h)
      plan.actions[b][static_cast<std::size_t>(h)] =
          sol.action(b, static_cast<std::size_t>(h));
  }
  return plan;
}

}  // namespace battsched
