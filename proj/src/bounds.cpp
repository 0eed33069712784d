#include "battsched/bounds.hpp"

#include <cmath>

namespace battsched::bounds {

void BoundParams::validate() const {
  if (total_steps < 0 || beta < 0 || diam < 0 || g_lip < 0 || sigma < 0 ||
      c < 0 || opt_cost < 0)
    fail(Errc::Config, "bound parameters must be non-negative");
  if (!(alpha > 0.0 && alpha <= 1.0))
    fail(Errc::Config, "alpha must lie in (0, 1]");
  if (!(a >= 0.0 && a < 1.0)) fail(Errc::Config, "a must lie in [0, 1)");
}

double bound_iid(const BoundParams& p, long long v) {
  p.validate();
  if (v < 1) fail(Errc::Config, "commitment v must be >= 1");
  return p.opt_cost + 2.0 * p.total_steps * p.beta * p.diam / v +
         2.0 * p.g_lip * p.total_steps * std::pow(p.sigma, p.alpha);
}

double fv_norm_expdecay(const BoundParams& p, long long v) {
  p.validate();
  if (v < 1) fail(Errc::Config, "commitment v must be >= 1");
  const double a2 = p.a * p.a;
  // finite geometric sum over lead times s = 0..v (v+1 terms)
  double sum;
  if (p.a == 0.0)
    sum = 1.0;
  else
    sum = (1.0 - std::pow(a2, static_cast<double>(v + 1))) / (1.0 - a2);
  return std::sqrt(p.c * p.c * p.sigma * p.sigma * sum);
}

double bound_expdecay(const BoundParams& p, long long v) {
  p.validate();
  if (v < 1) fail(Errc::Config, "commitment v must be >= 1");
  if (p.alpha != 1.0)
    fail(Errc::Unsupported,
         "the exp-decay bound is derived for alpha = 1 only");
  return p.opt_cost + 2.0 * p.total_steps * p.beta * p.diam / v +
         2.0 * p.g_lip * p.total_steps * fv_norm_expdecay(p, v);
}

TradeoffCurve tradeoff_curve(const BoundParams& p, long long v_max) {
  if (v_max < 1) fail(Errc::Config, "v_max must be >= 1");
  TradeoffCurve curve;
  curve.points.reserve(static_cast<std::size_t>(v_max));
  double best_iid = 0.0, best_exp = 0.0;
  for (long long v = 1; v <= v_max; ++v) {
    TradeoffPoint pt;
    pt.v = v;
    pt.bound_iid = bound_iid(p, v);
    pt.bound_expdecay = bound_expdecay(p, v);
    if (v == 1 || pt.bound_iid < best_iid) {
      best_iid = pt.bound_iid;
      curve.argmin_iid = v;
    }
    if (v == 1 || pt.bound_expdecay < best_exp) {
      best_exp = pt.bound_expdecay;
      curve.argmin_expdecay = v;
    }
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace battsched::bounds
