#pragma once

#include <vector>

#include "battsched/lookahead.hpp"

// Test-only oracles, kept independent of the solver they check.

namespace battsched::oracle {

// Exhaustive search over signed actions discretized at `step` for a
// single-battery lookahead problem: exact SOC dynamics, infeasible sequences
// rejected, expected cost over scenarios (same cost functional as the
// lookahead). Cost is exponential in the horizon; keep horizon <= 4 and
// p_max small.
struct BruteResult {
  double cost = 0.0;
  std::vector<double> actions;
};

BruteResult brute_force_lookahead(const LookaheadProblem& problem, double step);

// Expected cost of one concrete signed action sequence under the problem's
// scenarios; +infinity when the sequence leaves the feasible SOC range.
double sequence_cost(const LookaheadProblem& problem,
                     const std::vector<double>& actions);

}  // namespace battsched::oracle
