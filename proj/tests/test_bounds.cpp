#include <doctest.h>

#include <cmath>

#include "battsched/bounds.hpp"

using namespace battsched;
using bounds::BoundParams;

namespace {

BoundParams balanced() {
  BoundParams p;
  p.total_steps = 24;
  p.beta = 1;
  p.diam = 1;
  p.g_lip = 1;
  p.alpha = 1;
  p.sigma = 1;
  p.a = 0.9;
  p.c = 1;
  return p;
}

}  // namespace

TEST_CASE("iid bound hand values") {
  BoundParams p = balanced();
  p.sigma = 0.0;
  CHECK(bounds::bound_iid(p, 24) == doctest::Approx(2.0).epsilon(1e-12));

  // strictly decreasing in v when sigma = 0
  double last = bounds::bound_iid(p, 1);
  for (long long v = 2; v <= 24; ++v) {
    const double b = bounds::bound_iid(p, v);
    CHECK(b < last);
    last = b;
  }

  // doubling beta doubles the gap to the reference cost
  BoundParams q = p;
  q.beta = 2;
  q.opt_cost = 5.0;
  p.opt_cost = 5.0;
  CHECK(bounds::bound_iid(q, 6) - q.opt_cost ==
        doctest::Approx(2.0 * (bounds::bound_iid(p, 6) - p.opt_cost))
            .epsilon(1e-12));

  CHECK_THROWS_AS(bounds::bound_iid(p, 0), Error);
}

TEST_CASE("iid bound differences depend only on the switching term") {
  BoundParams p = balanced();
  p.sigma = 0.7;
  const double lhs = bounds::bound_iid(p, 3) - bounds::bound_iid(p, 8);
  const double rhs =
      2.0 * p.total_steps * p.beta * p.diam * (1.0 / 3.0 - 1.0 / 8.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("fv norm hand values") {
  BoundParams p = balanced();

  SUBCASE("a = 0 collapses to c * sigma") {
    p.a = 0.0;
    p.c = 1.0;
    p.sigma = 0.8;
    CHECK(bounds::fv_norm_expdecay(p, 1) ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(bounds::fv_norm_expdecay(p, 9) ==
          doctest::Approx(0.8).epsilon(1e-12));
  }

  SUBCASE("two-term sum at a = 0.5") {
    p.a = 0.5;
    CHECK(bounds::fv_norm_expdecay(p, 1) ==
          doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
  }

  SUBCASE("approaches the geometric limit for large v") {
    p.a = 0.9;
    const double limit = p.c * p.sigma / std::sqrt(1.0 - 0.81);
    CHECK(bounds::fv_norm_expdecay(p, 400) ==
          doctest::Approx(limit).epsilon(1e-9));
    CHECK(bounds::fv_norm_expdecay(p, 400) <= limit);
  }

  SUBCASE("monotone in v, c, sigma and a") {
    const double base = bounds::fv_norm_expdecay(p, 4);
    CHECK(bounds::fv_norm_expdecay(p, 5) >= base);
    BoundParams q = p;
    q.c = 1.5;
    CHECK(bounds::fv_norm_expdecay(q, 4) >= base);
    q = p;
    q.sigma = 1.5;
    CHECK(bounds::fv_norm_expdecay(q, 4) >= base);
    q = p;
    q.a = 0.95;
    CHECK(bounds::fv_norm_expdecay(q, 4) >= base);
  }

  SUBCASE("a >= 1 is rejected") {
    p.a = 1.0;
    CHECK_THROWS_AS(bounds::fv_norm_expdecay(p, 2), Error);
  }
}

TEST_CASE("exp-decay bound") {
  SUBCASE("a = 0 matches the iid bound up to the c factor") {
    BoundParams p = balanced();
    p.a = 0.0;
    p.c = 1.0;
    CHECK(bounds::bound_expdecay(p, 5) ==
          doctest::Approx(bounds::bound_iid(p, 5)).epsilon(1e-12));
    p.c = 2.0;
    const double extra = 2.0 * p.g_lip * p.total_steps * p.sigma;  // (c-1)*term
    CHECK(bounds::bound_expdecay(p, 5) ==
          doctest::Approx(bounds::bound_iid(p, 5) + extra).epsilon(1e-12));
  }

  SUBCASE("beta = 0 leaves a non-decreasing bound; argmin at v = 1") {
    BoundParams p = balanced();
    p.beta = 0.0;
    double last = bounds::bound_expdecay(p, 1);
    for (long long v = 2; v <= 16; ++v) {
      const double b = bounds::bound_expdecay(p, v);
      CHECK(b >= last);
      last = b;
    }
    CHECK(bounds::tradeoff_curve(p, 12).argmin_expdecay == 1);
  }

  SUBCASE("alpha != 1 is unsupported") {
    BoundParams p = balanced();
    p.alpha = 0.5;
    CHECK_THROWS_AS(bounds::bound_expdecay(p, 3), Error);
    CHECK_NOTHROW(bounds::bound_iid(p, 3));
  }

  SUBCASE("both bounds never fall below the reference cost") {
    BoundParams p = balanced();
    p.opt_cost = 7.5;
    for (long long v = 1; v <= 24; ++v) {
      CHECK(bounds::bound_iid(p, v) >= p.opt_cost);
      CHECK(bounds::bound_expdecay(p, v) >= p.opt_cost);
    }
  }
}

TEST_CASE("trade-off curve argmins") {
  SUBCASE("sigma = 0 puts both argmins at v_max") {
    BoundParams p = balanced();
    p.sigma = 0.0;
    const auto c = bounds::tradeoff_curve(p, 12);
    CHECK(c.argmin_iid == 12);
    CHECK(c.argmin_expdecay == 12);
  }

  SUBCASE("balanced parameters give an interior exp-decay argmin") {
    const auto c = bounds::tradeoff_curve(balanced(), 12);
    CHECK(c.argmin_iid == 12);  // noise term is v-independent
    CHECK(c.argmin_expdecay > 1);
    CHECK(c.argmin_expdecay < 12);
    // exhaustive scan is the oracle
    double best = c.points[0].bound_expdecay;
    long long best_v = 1;
    for (const auto& pt : c.points)
      if (pt.bound_expdecay < best) {
        best = pt.bound_expdecay;
        best_v = pt.v;
      }
    CHECK(best_v == c.argmin_expdecay);
  }

  SUBCASE("curve has one point per commitment") {
    const auto c = bounds::tradeoff_curve(balanced(), 7);
    REQUIRE(c.points.size() == 7);
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(c.points[i].v == static_cast<long long>(i + 1));
  }
}
