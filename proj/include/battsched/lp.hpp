#pragma once

#include <utility>
#include <vector>

namespace battsched::lp {

enum class Sense { Le, Ge, Eq };

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // (column, value)
  Sense sense = Sense::Le;
  double rhs = 0.0;
};

// min c'x  s.t. rows, lower <= x <= upper (upper may be +infinity).
struct Problem {
  int n_vars = 0;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  // Optional warm start: one entry per row naming the column to make basic
  // (-1 for the row's slack). Must describe a feasible basis at the point
  // where every structural variable sits at its lower bound; rows it cannot
  // canonicalize fall back to phase 1.
  std::vector<int> crash_basis;

  int add_var(double c, double lo, double hi);
  void add_row(Row row) { rows.push_back(std::move(row)); }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
  double max_violation = 0.0;  // primal residual over rows and bounds
};

struct Options {
  double tol = 1e-9;
  int max_iterations = 0;  // 0 -> automatic
};

// Dense bounded-variable primal simplex, two phases. Pricing is Dantzig's
// rule with an automatic switch to Bland's rule after a run of degenerate
// steps, so termination is guaranteed and results are deterministic.
Solution solve(const Problem& p, const Options& opts = {});

}  // namespace battsched::lp
