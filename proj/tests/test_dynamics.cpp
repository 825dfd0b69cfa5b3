#include <random>

#include "doctest.h"

#include "curvegame/dynamics.hpp"
#include "curvegame/equilibrium.hpp"

using namespace curvegame;

namespace {

GameParams two_person() { return GameParams::create({0.75, 0.75}, 0.70); }

}  // namespace

TEST_CASE("extremal limits at the illustrated instance") {
  const Trajectory hi = iterate_extremal(two_person(), Extremal::Greatest);
  CHECK(hi.converged);
  CHECK(hi.limit.max_distance(Profile({0.75, 0.75})) <= 1e-12);
  CHECK(hi.steps.front() == Profile({1.0, 1.0}));

  const Trajectory lo = iterate_extremal(two_person(), Extremal::Least);
  CHECK(lo.converged);
  CHECK(lo.limit.max_distance(Profile({8.0 / 15.0, 8.0 / 15.0})) <= 1e-6);
  REQUIRE(lo.equilibrium_gap.has_value());
  CHECK(*lo.equilibrium_gap <= 1e-6);

  for (std::size_t s = 1; s < lo.steps.size(); ++s) {
    CHECK(lo.steps[s - 1].dominated_by(lo.steps[s], 1e-12));
  }
  for (std::size_t s = 1; s < hi.steps.size(); ++s) {
    CHECK(hi.steps[s].dominated_by(hi.steps[s - 1], 1e-12));
  }
}

TEST_CASE("seeded at an equilibrium") {
  DynamicsOptions opt;
  opt.seed = Profile({0.75, 0.75});
  const Trajectory t = iterate_extremal(two_person(), Extremal::Least, opt);
  CHECK(t.iterations <= 1);
  CHECK(t.limit == Profile({0.75, 0.75}));
  CHECK_FALSE(t.equilibrium_gap.has_value());
}

TEST_CASE("iteration cap") {
  DynamicsOptions opt;
  opt.max_iter = 1;
  try {
    iterate_extremal(two_person(), Extremal::Greatest, opt);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK_FALSE(e.trajectory().converged);
    CHECK(e.trajectory().steps.size() == 2);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(iterate_extremal(GameParams::create({0.5}, 0.5), Extremal::Least),
                  std::domain_error);
  DynamicsOptions opt;
  opt.seed = Profile({0.1});
  CHECK_THROWS_AS(iterate_extremal(two_person(), Extremal::Least, opt), std::invalid_argument);
}

TEST_CASE("rationalizable bounds") {
  const RationalizableBounds b = rationalizable_bounds(two_person());
  CHECK(b.low.max_distance(Profile({8.0 / 15.0, 8.0 / 15.0})) <= 1e-6);
  CHECK(b.high.max_distance(Profile({0.75, 0.75})) <= 1e-12);

  const GameParams single = GameParams::create({0.3, 0.4, 0.5}, 0.9);
  const RationalizableBounds s = rationalizable_bounds(single);
  if (enumerate_equilibria(single).size() == 1) {
    CHECK(s.low.max_distance(s.high) <= 1e-6);
  }
}

TEST_CASE("round-robin updates reach the same extremal points") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  DynamicsOptions opt;
  opt.order = UpdateOrder::RoundRobin;
  for (int c = 0; c < 50; ++c) {
    const GameParams p = GameParams::create({u(rng), u(rng), u(rng)}, u(rng));
    const auto eq = enumerate_equilibria(p);
    const Trajectory hi = iterate_extremal(p, Extremal::Greatest, opt);
    const Trajectory lo = iterate_extremal(p, Extremal::Least, opt);
    CHECK(hi.limit.max_distance(eq.front().profile) <= 1e-6);
    CHECK(lo.limit.max_distance(eq.back().profile) <= 1e-6);
  }
}
