#pragma once

#include <vector>

#include "battsched/errors.hpp"

// Closed-form upper bounds on the expected cost gap between a fixed-horizon
// controller with commitment v and the offline optimum, for two prediction
// error models: i.i.d. noise and noise whose correlation decays
// exponentially with lead time. These evaluators are analytic companions to
// the simulator; the simulator's realized cost is a different functional, so
// comparisons between the two are qualitative.

namespace battsched::bounds {

struct BoundParams {
  double total_steps = 0.0;  // T
  double beta = 0.0;         // switching weight
  double diam = 0.0;         // action-set diameter
  double g_lip = 0.0;        // Hoelder/Lipschitz constant of the stage cost
  double alpha = 1.0;        // Hoelder exponent in (0, 1]
  double sigma = 0.0;        // per-step noise scale
  double a = 0.0;            // correlation decay rate in [0, 1)
  double c = 1.0;            // correlation magnitude
  double opt_cost = 0.0;     // reference offline cost

  void validate() const;
};

// opt + 2*T*beta*diam / v + 2*g_lip*T*sigma^alpha. The noise term does not
// depend on v, so with sigma = 0 the bound strictly decreases in v.
double bound_iid(const BoundParams& p, long long v);

// sqrt of the finite geometric error-variance sum over lead times 0..v:
// sqrt(c^2 sigma^2 (1 - a^(2(v+1))) / (1 - a^2)).
double fv_norm_expdecay(const BoundParams& p, long long v);

// opt + 2*T*beta*diam / v + 2*g_lip*T*fv_norm_expdecay(v). Requires
// alpha = 1; the accumulated-error term grows with v, so the two terms trade
// off and the minimizer can be interior.
double bound_expdecay(const BoundParams& p, long long v);

struct TradeoffPoint {
  long long v = 0;
  double bound_iid = 0.0;
  double bound_expdecay = 0.0;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  long long argmin_iid = 0;
  long long argmin_expdecay = 0;
};

// Bounds tabulated for v = 1..v_max with the (first) argmin of each.
TradeoffCurve tradeoff_curve(const BoundParams& p, long long v_max);

}  // namespace battsched::bounds
