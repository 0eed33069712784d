#include "oracles.hpp"

#include <cmath>
#include <limits>

namespace battsched::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSocSlack = 1e-9;

}  // namespace

double sequence_cost(const LookaheadProblem& pb,
                     const std::vector<double>& actions) {
  const auto& spec = pb.batteries.front();
  double soc = pb.soc0.front();
  for (double x : actions) {
    if (std::abs(x) > spec.p_max + kSocSlack) return kInf;
    soc += x >= 0.0 ? spec.eta_charge * x : x / spec.eta_discharge;
    if (soc < spec.soc_min - kSocSlack || soc > spec.soc_max + kSocSlack)
      return kInf;
  }
  double total = 0.0;
  for (const auto& base : pb.base_scenarios) {
    double cost = 0.0;
    double prev = pb.prev_net_load.value_or(0.0);
    for (int h = 0; h < pb.horizon; ++h) {
      const double e = base[static_cast<std::size_t>(h)] +
                       actions[static_cast<std::size_t>(h)];
      const double k = pb.price[static_cast<std::size_t>(h)] +
                       pb.w_co2 * pb.carbon[static_cast<std::size_t>(h)];
      cost += std::max(0.0, k * e);
      if (pb.beta > 0.0 && (h > 0 || pb.prev_net_load))
        cost += pb.beta * std::abs(e - prev);
      prev = e;
    }
    total += cost;
  }
  return total / static_cast<double>(pb.base_scenarios.size());
}

namespace {

void search(const LookaheadProblem& pb, const std::vector<double>& grid,
            std::vector<double>& actions, int h, BruteResult& best) {
  if (h == pb.horizon) {
    const double c = sequence_cost(pb, actions);
    if (c < best.cost) {
      best.cost = c;
      best.actions = actions;
    }
    return;
  }
  for (double x : grid) {
    actions[static_cast<std::size_t>(h)] = x;
    // prune sequences that have already left the SOC range
    const auto& spec = pb.batteries.front();
    double soc = pb.soc0.front();
    bool ok = true;
    for (int j = 0; j <= h; ++j) {
      const double a = actions[static_cast<std::size_t>(j)];
      soc += a >= 0.0 ? spec.eta_charge * a : a / spec.eta_discharge;
      if (soc < spec.soc_min - kSocSlack || soc > spec.soc_max + kSocSlack) {
        ok = false;
        break;
      }
    }
    if (ok) search(pb, grid, actions, h + 1, best);
  }
}

}  // namespace

BruteResult brute_force_lookahead(const LookaheadProblem& pb, double step) {
  pb.validate();
  if (pb.batteries.size() != 1)
    fail(Errc::InvalidSpec, "brute force supports exactly one battery");
  const auto& spec = pb.batteries.front();
  std::vector<double> grid;
  const int k_max = static_cast<int>(std::floor(spec.p_max / step + 1e-9));
  for (int k = -k_max; k <= k_max; ++k) grid.push_back(k * step);

  BruteResult best;
  best.cost = kInf;
  std::vector<double> actions(static_cast<std::size_t>(pb.horizon), 0.0);
  search(pb, grid, actions, 0, best);
  return best;
}

}  // namespace battsched::oracle
