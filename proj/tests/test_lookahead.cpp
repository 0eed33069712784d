#include <doctest.h>

#include <cmath>

#include "battsched/lookahead.hpp"
#include "battsched/rng.hpp"
#include "oracles.hpp"

using namespace battsched;

namespace {

BatterySpec small_battery(double eta = 1.0, double p_max = 0.2) {
  return BatterySpec{1.0, 0.0, 1.0, p_max, eta, eta, 0.5};
}

LookaheadProblem base_problem(int horizon, double beta = 0.0) {
  LookaheadProblem pb;
  pb.origin = 0;
  pb.horizon = horizon;
  pb.batteries = {small_battery()};
  pb.soc0 = {0.5};
  pb.base_scenarios = {std::vector<double>(static_cast<std::size_t>(horizon), 1.0)};
  pb.price.assign(static_cast<std::size_t>(horizon), 0.5);
  pb.carbon.assign(static_cast<std::size_t>(horizon), 0.1);
  pb.beta = beta;
  pb.prev_net_load = 1.0;
  return pb;
}

// random instance in the regime where the split-variable LP is an exact
// model of the signed-action battery (eta = 1, or no switching term)
LookaheadProblem random_instance(rng::SplitMix64& gen, bool allow_beta) {
  LookaheadProblem pb;
  pb.origin = 0;
  pb.horizon = 2 + static_cast<int>(gen.next() % 2);  // 2..3
  const bool ideal = (gen.next() & 1) != 0;
  const double eta = ideal ? 1.0 : 0.85 + 0.1 * rng::unit_open(gen.next());
  pb.batteries = {small_battery(eta, 0.15 + 0.1 * rng::unit_open(gen.next()))};
  pb.soc0 = {0.2 + 0.6 * rng::unit_open(gen.next())};
  std::vector<double> base(static_cast<std::size_t>(pb.horizon));
  for (auto& b : base) b = 2.0 * rng::unit_open(gen.next()) - 0.8;
  pb.base_scenarios = {base};
  pb.price.resize(static_cast<std::size_t>(pb.horizon));
  pb.carbon.resize(static_cast<std::size_t>(pb.horizon));
  for (auto& v : pb.price) v = 0.05 + rng::unit_open(gen.next());
  for (auto& v : pb.carbon) v = 0.3 * rng::unit_open(gen.next());
  // with eta < 1 the switching term must stay off; otherwise the LP's
  // charge+discharge relaxation is not tight for the signed battery
  pb.beta = (allow_beta && ideal) ? 0.5 * rng::unit_open(gen.next()) : 0.0;
  pb.prev_net_load = 2.0 * rng::unit_open(gen.next()) - 0.5;
  return pb;
}

}  // namespace

TEST_CASE("build_lp shapes") {
  SUBCASE("one hour, one building, beta 0") {
    auto pb = base_problem(1);
    auto built = build_lp(pb);
    // vars: xp, xd, soc, u
    CHECK(built.lp.n_vars == 4);
    // rows: soc recursion + cost bound
    CHECK(built.lp.rows.size() == 2);
  }

  SUBCASE("beta = 0 emits no ramp variables") {
    auto pb = base_problem(3);
    auto built = build_lp(pb);
    CHECK(built.lp.n_vars == 3 * 4);  // xp, xd, soc, u per hour
  }

  SUBCASE("beta > 0 adds one ramp variable and two rows per hour") {
    auto pb = base_problem(3, 0.5);
    auto built = build_lp(pb);
    CHECK(built.lp.n_vars == 3 * 5);
    CHECK(built.lp.rows.size() == 3 + 3 + 6);
  }

  SUBCASE("scenarios share actions and replicate auxiliaries") {
    auto pb = base_problem(2, 0.5);
    pb.base_scenarios = {{1.0, 1.0}, {2.0, 2.0}, {0.5, 0.5}};
    auto built = build_lp(pb);
    // 2*(xp+xd) + 2 soc shared; (u 2 + s 2) per scenario
    CHECK(built.lp.n_vars == 4 + 2 + 3 * 4);
    CHECK(built.lp.rows.size() == 2 + 3 * (2 + 4));
  }

  SUBCASE("without an anchor the first hour has no ramp term") {
    auto pb = base_problem(3, 0.5);
    pb.prev_net_load.reset();
    auto built = build_lp(pb);
    CHECK(built.lp.n_vars == 3 * 4 + 2);
    CHECK(built.lp.rows.size() == 3 + 3 + 4);
  }
}

TEST_CASE("two-hour toy: cheap second hour defers charging") {
  LookaheadProblem pb = base_problem(2);
  pb.price = {1.0, 0.1};
  pb.carbon = {0.0, 0.0};
  pb.batteries = {BatterySpec{1.0, 0.0, 1.0, 0.2, 1.0, 1.0, 0.0}};
  pb.soc0 = {0.0};
  // positive base so charging costs money in hour 1 but nearly nothing in 2
  pb.base_scenarios = {{1.0, 1.0}};
  pb.beta = 0.0;
  auto sol = solve_lookahead(pb);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.action(0, 0) == doctest::Approx(0.0).epsilon(1e-9));

  auto brute = oracle::brute_force_lookahead(pb, 0.01);
  CHECK(sol.objective <= brute.cost + 1e-7);
  CHECK(brute.cost - sol.objective <= 0.05);
}

TEST_CASE("zero action is always feasible: optimum never exceeds its cost") {
  rng::SplitMix64 gen{5};
  for (int t = 0; t < 25; ++t) {
    auto pb = random_instance(gen, true);
    auto sol = solve_lookahead(pb);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    const double zero_cost = oracle::sequence_cost(
        pb, std::vector<double>(static_cast<std::size_t>(pb.horizon), 0.0));
    CHECK(sol.objective <= zero_cost + 1e-7);
  }
}

TEST_CASE("LP matches brute force on random small instances") {
  rng::SplitMix64 gen{77};
  const double step = 0.01;
  for (int t = 0; t < 25; ++t) {
    auto pb = random_instance(gen, true);
    auto sol = solve_lookahead(pb);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    auto brute = oracle::brute_force_lookahead(pb, step);
    CHECK(sol.objective <= brute.cost + 1e-7);
    // one grid step of slack, scaled by the worst per-unit cost
    double k_sum = 0.0;
    for (std::size_t h = 0; h < pb.price.size(); ++h)
      k_sum += pb.price[h] + pb.carbon[h] + 2.0 * pb.beta;
    CHECK(brute.cost - sol.objective <= step * k_sum + 1e-7);
  }
}

TEST_CASE("stochastic consistency: N identical scenarios = deterministic") {
  rng::SplitMix64 gen{123};
  for (int t = 0; t < 10; ++t) {
    auto pb = random_instance(gen, true);
    auto det = solve_lookahead(pb);
    auto pb_n = pb;
    pb_n.base_scenarios = {pb.base_scenarios[0], pb.base_scenarios[0],
                           pb.base_scenarios[0]};
    auto sto = solve_lookahead(pb_n);
    REQUIRE(det.status == LpSolution::Status::Optimal);
    REQUIRE(sto.status == LpSolution::Status::Optimal);
    CHECK(sto.objective == doctest::Approx(det.objective).epsilon(1e-8));
  }
}

TEST_CASE("scenario-average bound: stochastic optimum >= mean of per-scenario optima") {
  rng::SplitMix64 gen{321};
  for (int t = 0; t < 10; ++t) {
    auto pb = random_instance(gen, true);
    // three distinct scenarios
    auto s0 = pb.base_scenarios[0];
    auto s1 = s0, s2 = s0;
    for (auto& v : s1) v += 0.3;
    for (auto& v : s2) v -= 0.2;
    pb.base_scenarios = {s0, s1, s2};
    auto sto = solve_lookahead(pb);
    REQUIRE(sto.status == LpSolution::Status::Optimal);
    double mean_det = 0.0;
    for (const auto& s : {s0, s1, s2}) {
      auto one = pb;
      one.base_scenarios = {s};
      auto det = solve_lookahead(one);
      REQUIRE(det.status == LpSolution::Status::Optimal);
      mean_det += det.objective;
    }
    mean_det /= 3.0;
    CHECK(sto.objective >= mean_det - 1e-7);
  }
}

TEST_CASE("switching cost at the optimum is non-increasing in beta") {
  rng::SplitMix64 gen{55};
  for (int t = 0; t < 8; ++t) {
    auto pb = random_instance(gen, false);
    pb.batteries[0].eta_charge = pb.batteries[0].eta_discharge = 1.0;
    double last_switch = -1.0;
    bool first = true;
    for (double beta : {0.0, 0.1, 0.3, 1.0}) {
      pb.beta = beta;
      auto sol = solve_lookahead(pb);
      REQUIRE(sol.status == LpSolution::Status::Optimal);
      // raw switching cost of the solution
      double prev = *pb.prev_net_load, sw = 0.0;
      for (int h = 0; h < pb.horizon; ++h) {
        const double e = pb.base_scenarios[0][static_cast<std::size_t>(h)] +
                         sol.action(0, static_cast<std::size_t>(h));
        sw += std::abs(e - prev);
        prev = e;
      }
      if (!first) CHECK(sw <= last_switch + 1e-6);
      last_switch = sw;
      first = false;
    }
  }
}

TEST_CASE("no simultaneous charge and discharge at positive prices") {
  rng::SplitMix64 gen{808};
  for (int t = 0; t < 20; ++t) {
    auto pb = random_instance(gen, true);
    auto sol = solve_lookahead(pb);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    for (int h = 0; h < pb.horizon; ++h) {
      const double xp = sol.x_pos[0][static_cast<std::size_t>(h)];
      const double xn = -sol.x_neg[0][static_cast<std::size_t>(h)];
      CHECK(std::min(xp, xn) <= 1e-9);
    }
  }
}

TEST_CASE("committed prefix is consistent with a standalone prefix solve") {
  rng::SplitMix64 gen{12};
  for (int t = 0; t < 10; ++t) {
    auto pb = random_instance(gen, true);
    if (pb.horizon < 3) continue;
    auto sol = solve_lookahead(pb);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    // cost of the first 2 hours of the full solution, standalone
    auto prefix_pb = pb;
    prefix_pb.horizon = 2;
    prefix_pb.base_scenarios = {{pb.base_scenarios[0][0], pb.base_scenarios[0][1]}};
    prefix_pb.price = {pb.price[0], pb.price[1]};
    prefix_pb.carbon = {pb.carbon[0], pb.carbon[1]};
    const double prefix_cost = oracle::sequence_cost(
        prefix_pb, {sol.action(0, 0), sol.action(0, 1)});
    auto prefix_opt = solve_lookahead(prefix_pb);
    REQUIRE(prefix_opt.status == LpSolution::Status::Optimal);
    CHECK(prefix_opt.objective <= prefix_cost + 1e-7);
  }
}

TEST_CASE("plan_from_solution commits the requested hours") {
  auto pb = base_problem(4);
  auto sol = solve_lookahead(pb);
  REQUIRE(sol.status == LpSolution::Status::Optimal);

  auto plan = plan_from_solution(pb, sol, 4);
  CHECK(plan.start == 1);
  CHECK(plan.length() == 4);

  auto one = plan_from_solution(pb, sol, 1);
  CHECK(one.length() == 1);
  CHECK(one.actions[0][0] == sol.action(0, 0));

  CHECK_THROWS_AS(plan_from_solution(pb, sol, 5), Error);
  CHECK_THROWS_AS(plan_from_solution(pb, sol, 0), Error);
}

TEST_CASE("solution max_violation stays at solver tolerance") {
  rng::SplitMix64 gen{4711};
  for (int t = 0; t < 15; ++t) {
    auto pb = random_instance(gen, true);
    auto sol = solve_lookahead(pb);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(sol.max_violation <= 1e-7);
  }
}

TEST_CASE("flat forecasts (zero base increments) solve correctly") {
  // consecutive equal base values make both ramp rows of an hour nominate
  // the same auxiliary for the starting basis
  LookaheadProblem pb = base_problem(4, 0.5);
  pb.base_scenarios = {{1.0, 1.0, 1.0, 1.0}};
  pb.prev_net_load = 1.0;
  auto sol = solve_lookahead(pb);
  REQUIRE(sol.status == LpSolution::Status::Optimal);
  CHECK(sol.max_violation <= 1e-7);
  const double zero_cost = oracle::sequence_cost(pb, {0, 0, 0, 0});
  CHECK(sol.objective <= zero_cost + 1e-7);
}
