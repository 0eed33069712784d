#pragma once

#include <optional>
#include <vector>

#include "battsched/env.hpp"
#include "battsched/lp.hpp"
#include "battsched/timeseries.hpp"

// The receding lookahead problem: choose battery actions for the next H'
// hours to minimize expected district cost over the forecast scenarios,
// optionally with a switching penalty on hour-to-hour net load changes.
// Price and carbon intensity are taken as known over the window. One shared
// action sequence serves all scenarios; scenario weights are equal.

namespace battsched {

struct LookaheadProblem {
  Hour origin = 0;  // decision epoch; actions cover origin+1 .. origin+horizon
  int horizon = 0;  // H', possibly truncated below the archive horizon
  std::vector<BatterySpec> batteries;
  std::vector<double> soc0;  // per building, at the end of the origin hour
  // District base load (load - pv summed over buildings) per scenario:
  // n_scenarios rows of `horizon` values.
  std::vector<std::vector<double>> base_scenarios;
  std::vector<double> price;   // horizon values
  std::vector<double> carbon;  // horizon values
  double w_co2 = 1.0;          // carbon weight inside the lookahead cost
  double beta = 0.0;           // switching-cost weight
  // Executed district net load at the origin hour, anchoring the first ramp
  // term. Without it the first hour carries no switching term.
  std::optional<double> prev_net_load;

  int n_scenarios() const { return static_cast<int>(base_scenarios.size()); }
  void validate() const;
};

struct LpSolution {
  enum class Status { Optimal, Infeasible, IterationLimit };
  Status status = Status::IterationLimit;
  double objective = 0.0;
  std::vector<std::vector<double>> x_pos;  // [building][hour] >= 0
  std::vector<std::vector<double>> x_neg;  // [building][hour] <= 0
  int iterations = 0;
  double max_violation = 0.0;

  double action(std::size_t b, std::size_t h) const {
    return x_pos[b][h] + x_neg[b][h];
  }
};

// Index layout of the lookahead LP, needed to interpret raw solutions.
struct LookaheadLp {
  lp::Problem lp;
  int n_buildings = 0;
  int horizon = 0;
  int n_scenarios = 0;
  bool has_anchor_ramp = false;

  int xp(int b, int h) const { return b * 2 * horizon + h; }          // h 0-based
  int xd(int b, int h) const { return b * 2 * horizon + horizon + h; }
  int soc(int b, int h) const {
    return n_buildings * 2 * horizon + b * horizon + h;
  }
};

// Linear program for the problem: shared actions, one cost auxiliary per
// (scenario, hour) linearizing max(0, e * k), optional ramp auxiliaries, and
// an SOC recursion per building. The zero-action point is always feasible.
LookaheadLp build_lp(const LookaheadProblem& problem);

LpSolution solve_lp(const LookaheadLp& built, double tol = 1e-9);

// Expected scenario cost of a solution's (netted) actions, free of the LP's
// internal tie-break term.
double lookahead_cost_of_actions(const LookaheadProblem& problem,
                                 const LpSolution& sol);

// Build and solve; the reported objective is lookahead_cost_of_actions.
LpSolution solve_lookahead(const LookaheadProblem& problem, double tol = 1e-9);

// First commit_v hours of the solution packaged as an executable plan.
Plan plan_from_solution(const LookaheadProblem& problem, const LpSolution& sol,
                        int commit_v);

}  // namespace battsched
