#include <cmath>
#include <random>

#include "doctest.h"

#include "curvegame/core.hpp"
#include "curvegame/response.hpp"

using namespace curvegame;

namespace {

GameParams two_person() { return GameParams::create({0.75, 0.75}, 0.70); }
GameParams three_person() { return GameParams::create({0.6, 0.8, 0.85}, 0.80); }

// Plain bisection on phi over its bracket, as an independent route to J.
double bisect_jump(const GameParams& p, std::size_t i) {
  const JumpBracket b = jump_bracket(p, i);
  double lo = b.lo;
  double hi = b.hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(p, i, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("jump point at the illustrated instances") {
  const GameParams p = two_person();
  CHECK(jump_point(p, 0) == doctest::Approx(0.7182).epsilon(5e-4 / 0.7182));
  CHECK(std::abs(phi(p, 0, 0.718)) <= 1e-3);

  const GameParams q = three_person();
  const double j3 = jump_point(q, 2);
  CHECK(std::abs(j3 - 0.789) <= 5e-4);
  CHECK(std::abs(phi(q, 2, j3)) <= 1e-10);
  CHECK(std::abs(phi(q, 2, 0.789)) <= 1e-3);
}

TEST_CASE("closed-form jump agrees with bisection") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_int_distribution<int> size(2, 12);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    std::vector<double> a(n);
    for (double& v : a) v = u(rng);
    const GameParams p = GameParams::create(a, u(rng));
    const std::size_t i = c % n;
    const double j = jump_point(p, i);
    CHECK(std::abs(j - bisect_jump(p, i)) <= 1e-9);
    const JumpBracket b = jump_bracket(p, i);
    CHECK(j >= b.lo - 1e-12);
    CHECK(j <= b.hi + 1e-12);
    CHECK(phi(p, i, b.lo) >= 0.0);
  }
}

TEST_CASE("phi domain") {
  const GameParams p = two_person();
  CHECK_THROWS_AS(phi(p, 0, 5.0), std::domain_error);
  CHECK(phi(p, 0, 0.6) > phi(p, 0, 0.7));
}

TEST_CASE("region classification") {
  // No-show interval lies below zero for a large class.
  const GameParams big = GameParams::create(std::vector<double>(18, 0.5), 0.75);
  CHECK(region_bounds(big, 0).no_show_upto < 0.0);
  for (double z = 0.0; z <= 1.0; z += 0.01) {
    CHECK(classify_opposing_mean(big, 0, z) != Region::NoShowSub);
  }

  // With n = 2 and m = 0.8 the broken-curve interval starts above 1.
  const GameParams q = GameParams::create({0.5, 0.9}, 0.8);
  CHECK(region_bounds(q, 1).curve_broken_above == doctest::Approx(1.6));
  for (double z = 0.0; z <= 1.0; z += 0.01) {
    CHECK(classify_opposing_mean(q, 1, z) != Region::CurveBroken);
  }

  const GameParams p = two_person();
  CHECK(classify_opposing_mean(p, 0, 0.9) == Region::MakeOrBreak);
  CHECK(classify_opposing_mean(p, 0, 0.3) == Region::CurveMade);
  const GameParams low = GameParams::create({0.1, 0.9}, 0.9);
  CHECK(classify_opposing_mean(low, 0, 0.5) == Region::NoShowSub);
  CHECK(std::string(to_string(Region::NoShowSub)) == "no_show");

  // The make-or-break strip shrinks onto m as the class grows.
  const GameParams huge = GameParams::create(std::vector<double>(100000, 0.6), 0.7);
  const RegionBounds hb = region_bounds(huge, 0);
  CHECK(std::abs(hb.curve_made_below - 0.7) < 1e-4);
  CHECK(std::abs(hb.curve_broken_above - 0.7) < 1e-4);
}

TEST_CASE("curve cutoff") {
  const GameParams p = two_person();
  CHECK(curve_cutoff(p, 0, 0.7) == doctest::Approx(0.7));
  CHECK(curve_cutoff(p, 0, 0.718) == doctest::Approx(0.682));
  CHECK(curve_cutoff(three_person(), 2, 0.789) == doctest::Approx(0.822));
  CHECK_THROWS_AS(curve_cutoff(p, 0, 0.2), std::domain_error);
}

TEST_CASE("best response at the illustrated instance") {
  const GameParams p = two_person();
  const double j = jump_point(p, 0);
  const BestResponse at = best_response(p, 0, j);
  REQUIRE(at.replies.size() == 2);
  CHECK(std::abs(at.least() - 0.58) <= 5e-3);
  CHECK(at.greatest() == 0.75);
  REQUIRE(at.jump.has_value());
  CHECK(std::abs(utility_vs(p, 0, at.least(), j) - utility_vs(p, 0, at.greatest(), j)) <= 1e-9);

  const BestResponse high = best_response(p, 0, 0.9);
  CHECK(high.replies == std::vector<double>{0.75});

  const BestResponse mid = best_response(p, 0, 8.0 / 15.0);
  REQUIRE(mid.replies.size() == 1);
  CHECK(mid.least() == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(mid.contains(0.5333333333, 1e-9));
}

TEST_CASE("best response matches a fine grid") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_int_distribution<int> size(2, 6);
  const int steps = 10000;
  int checked = 0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    std::vector<double> a(n);
    for (double& v : a) v = u(rng);
    const GameParams p = GameParams::create(a, u(rng));
    const double z = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const BestResponse br = best_response(p, 0, z);
    double best = -1.0;
    int arg = 0;
    for (int k = 0; k <= steps; ++k) {
      const double v = utility_vs(p, 0, k / static_cast<double>(steps), z);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    CHECK(br.contains(arg / static_cast<double>(steps), 1.0 / steps + 1e-12));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("dominated bounds") {
  const DominatedBounds d = dominated_bounds(two_person(), 0);
  CHECK(d.low == doctest::Approx(0.4));
  CHECK(d.high == 0.75);
  const DominatedBounds z = dominated_bounds(GameParams::create({0.2, 0.5}, 0.8), 0);
  CHECK(z.low == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int c = 0; c < 1000; ++c) {
    const GameParams p = GameParams::create({u(rng), u(rng), u(rng)}, u(rng));
    const double z0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DominatedBounds b = dominated_bounds(p, 0);
    const BestResponse br = best_response(p, 0, z0);
    for (double r : br.replies) {
      CHECK(r >= b.low - 1e-12);
      CHECK(r <= b.high + 1e-12);
    }
    const double above = b.high + (1.0 - b.high) * std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    CHECK(utility_vs(p, 0, b.high, z0) > utility_vs(p, 0, above, z0));
  }
}

TEST_CASE("asymptotic best response") {
  CHECK(asymptotic_best_response(0.85, 0.8, 0.8) == 0.85);
  CHECK(asymptotic_best_response(0.6, 0.8, 0.7) == doctest::Approx(0.6 - 0.4 * 0.1));
  CHECK(asymptotic_best_response(0.2, 0.8, 0.3) == 0.0);
  // Guaranteed positive effort once alpha >= m/(m+1).
  CHECK(0.75 / 1.75 == doctest::Approx(0.429).epsilon(1e-3));
  CHECK(asymptotic_best_response(0.75 / 1.75 + 1e-9, 0.75, 0.0) > 0.0);
  CHECK(asymptotic_best_response(0.75 / 1.75 - 1e-3, 0.75, 0.0) == 0.0);

  const std::size_t n = 1000000;
  const GameParams p = GameParams::create(std::vector<double>(n, 0.7), 0.8);
  for (double z = 0.0; z <= 1.0; z += 0.05) {
    // Skip the vanishing make-or-break strip around m.
    if (std::abs(z - 0.8) < 1e-3) continue;
    CHECK(std::abs(best_response(p, 0, z).greatest() - asymptotic_best_response(0.7, 0.8, z)) <= 1e-5);
  }
}
