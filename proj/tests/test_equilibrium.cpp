#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "curvegame/core.hpp"
#include "curvegame/equilibrium.hpp"
#include "curvegame/response.hpp"

using namespace curvegame;

namespace {

GameParams two_person() { return GameParams::create({0.75, 0.75}, 0.70); }

GameParams ten_student() {
  return GameParams::create({.38, .39, .42, .45, .5, .51, .55, .62, .65, .8}, 0.85);
}

GameParams random_params(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<double> a(n);
  for (double& v : a) v = u(rng);
  return GameParams::create(a, u(rng));
}

}  // namespace

TEST_CASE("ability index") {
  for (double z : {0.1, 0.5, 0.93}) {
    CHECK(ability_index(GameParams::create({z, z, z, z}, 0.5)).value == doctest::Approx(z).epsilon(1e-12));
  }
  const double a1 = 0.6, a2 = 0.9;
  const double two = 2 * (a1 + a2 - a1 * a2) / (4 - a1 - a2);
  const AbilityIndex ix = ability_index(GameParams::create({a1, a2}, 0.5));
  CHECK(ix.value == doctest::Approx(two).epsilon(1e-12));
  CHECK(ix.value == doctest::Approx(0.768).epsilon(1e-12));
  CHECK(ix.n == 2);

  std::mt19937_64 rng(3);
  for (int c = 0; c < 1000; ++c) {
    const GameParams p = random_params(rng, 2 + c % 9);
    const double v = ability_index(p).value;
    const auto [lo, hi] = std::minmax_element(p.alphas().begin(), p.alphas().end());
    CHECK(v >= *lo - 1e-12);
    CHECK(v <= *hi + 1e-12);
  }
}

TEST_CASE("ability order breaks ties by index") {
  const GameParams p = GameParams::create({0.5, 0.3, 0.5, 0.3}, 0.5);
  CHECK(ability_order(p) == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("curved interior candidate") {
  const Candidate c = curved_interior_candidate(two_person());
  CHECK(c.efforts[0] == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(c.efforts[1] == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(std::abs(c.efforts[0] - 0.533) < 1e-3);

  const GameParams eq = GameParams::create({0.7, 0.7, 0.7}, 0.8);
  const Candidate e = curved_interior_candidate(eq);
  CHECK(e.efforts[0] == doctest::Approx(e.efforts[2]));
  for (std::size_t i = 0; i < 3; ++i) CHECK(grade(eq, e.profile(), i) == doctest::Approx(0.8));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const GameParams p = random_params(rng, 2 + t % 7);
    const Candidate k0 = curved_interior_candidate(p);
    const double mean = std::accumulate(k0.efforts.begin(), k0.efforts.end(), 0.0) /
                        static_cast<double>(p.size());
    CHECK(std::abs(mean - k0.mean) <= 1e-12);
    const Candidate viak = k_dont_care_candidate(p, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(std::abs(viak.efforts[i] - k0.efforts[i]) <= 1e-12);
    }
  }
}

TEST_CASE("k-dont-care candidate") {
  const GameParams p = ten_student();
  const Candidate all = k_dont_care_candidate(p, 10);
  CHECK(all.mean == 0.0);
  for (double v : all.efforts) CHECK(v == 0.0);

  const Candidate three = k_dont_care_candidate(p, 3);
  CHECK(three.efforts[0] == 0.0);
  CHECK(three.efforts[1] == 0.0);
  CHECK(three.efforts[2] == 0.0);
  CHECK(three.efforts[3] > 0.0);
  CHECK(dont_care_statistic(p, three.mean) == doctest::Approx(0.4248).epsilon(5e-4 / 0.4248));
}

TEST_CASE("existence conditions") {
  const GameParams p = two_person();
  const NoCurveExistence nc = exists_no_curve(p);
  CHECK(nc.exists);
  CHECK(nc.threshold == doctest::Approx(0.5 * (0.7182 + 0.75)).epsilon(1e-3));
  CHECK(nc.slack > 0.0);

  const KDontCareExistence k0 = exists_k_dont_care(p, 0);
  CHECK(k0.exists);
  CHECK(k0.lower == doctest::Approx(0.10225).epsilon(1e-3));
  CHECK(k0.statistic == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(k0.upper == doctest::Approx(3.0).epsilon(1e-12));

  // Mean ability below target rules out the try-hard profile.
  CHECK_FALSE(exists_no_curve(GameParams::create({0.6, 0.65}, 0.7)).exists);

  // As the class grows the try-hard threshold approaches m.
  const GameParams big = GameParams::create(std::vector<double>(100000, 0.9), 0.7);
  CHECK(std::abs(exists_no_curve(big).threshold - 0.7) < 1e-4);

  const KDontCareExistence k3 = exists_k_dont_care(ten_student(), 3);
  CHECK(k3.exists);
  CHECK(k3.lower == 0.42);
  CHECK(k3.upper == 0.45);
  CHECK(k3.statistic == doctest::Approx(0.4248).epsilon(5e-4 / 0.4248));

  // Nobody cares: 0.3 <= 0.9 / 1.4.
  const KDontCareExistence all = exists_k_dont_care(GameParams::create({0.3, 0.3}, 0.9), 2);
  CHECK(all.exists);
  CHECK(all.upper == doctest::Approx(0.9 / 1.4));
  CHECK_FALSE(exists_k_dont_care(GameParams::create({0.3, 0.7}, 0.9), 2).exists);
}

TEST_CASE("jump condition beyond the printed interval") {
  // The interval test alone passes here, yet the top student prefers to break
  // the curve against the lone no-show.
  const GameParams p = GameParams::create({0.017, 0.732}, 0.32);
  const KDontCareExistence k1 = exists_k_dont_care(p, 1);
  CHECK(k1.printed_condition);
  CHECK_FALSE(k1.jump_condition);
  CHECK(k1.jump_slack < 0.0);
  CHECK_FALSE(k1.exists);
  const Candidate c = k_dont_care_candidate(p, 1);
  REQUIRE(c.feasible());
  CHECK_FALSE(is_fixed_point(p, c.profile()));
}

TEST_CASE("enumeration at the illustrated instances") {
  const std::vector<EquilibriumRecord> eq = enumerate_equilibria(two_person());
  REQUIRE(eq.size() == 2);
  CHECK(eq[0].kind == EquilibriumKind::no_curve());
  CHECK(eq[0].profile == Profile({0.75, 0.75}));
  CHECK(eq[1].kind == EquilibriumKind::dont_care(0));
  CHECK(eq[1].kind.label() == "k_dont_care:0");
  CHECK(eq[1].allocations[0].grade == doctest::Approx(0.70).epsilon(1e-9));
  CHECK(std::abs(eq[1].utilities[0] - 0.633) <= 1e-3);
  CHECK(std::abs(eq[0].utilities[1] - 0.57) <= 1e-3);
  for (const auto& r : eq) CHECK(r.verified);

  const std::vector<EquilibriumRecord> ten = enumerate_equilibria(ten_student());
  const bool has3 = std::any_of(ten.begin(), ten.end(), [](const EquilibriumRecord& r) {
    return r.kind == EquilibriumKind::dont_care(3);
  });
  CHECK(has3);

  const std::vector<EquilibriumRecord> lazy = enumerate_equilibria(GameParams::create({0.3, 0.3}, 0.9));
  CHECK(lazy.back().kind == EquilibriumKind::dont_care(2));
  CHECK(lazy.back().profile == Profile({0.0, 0.0}));
}

TEST_CASE("pareto comparison") {
  const GameParams p = two_person();
  const auto eq = enumerate_equilibria(p);
  const ParetoReport r = pareto_compare(p, eq[1], eq[0]);
  CHECK(r.effort == Order::Less);
  CHECK(r.utility == std::vector<Order>{Order::Greater, Order::Greater});
  CHECK(r.low_effort_pareto_dominates);
  CHECK(eq[0].allocations[0].grade > eq[1].allocations[0].grade);
  CHECK_FALSE(r.grade.has_value());

  const ParetoReport same = pareto_compare(p, eq[0], eq[0]);
  CHECK(same.effort == Order::Equal);
  CHECK(same.utility == std::vector<Order>{Order::Equal, Order::Equal});
}

TEST_CASE("grade inflation report") {
  const InflationReport r = asymptotic_report(0.70, 0.80, {0.90, 0.70});
  CHECK(r.curved);
  CHECK(std::abs(r.factor - 8.0 / 7.0) <= 1e-12);
  CHECK(std::abs(r.factor - 1.142857) <= 1e-6);
  REQUIRE(r.students.size() == 2);
  CHECK(std::abs(r.students[0].grade - 1.0286) <= 1e-3);
  CHECK(std::abs(r.students[1].grade - 0.80) <= 1e-6);
  CHECK(r.students[0].inferred_alpha == doctest::Approx(0.90));
  CHECK(r.students[1].leisure_ratio == doctest::Approx(r.factor));

  const InflationReport flat = asymptotic_report(0.8, 0.8, {0.6});
  CHECK(flat.factor == doctest::Approx(1.0));
  CHECK(flat.students[0].effort == doctest::Approx(0.6));

  const InflationReport none = asymptotic_report(0.9, 0.8, {0.6});
  CHECK_FALSE(none.curved);
  CHECK(none.factor == 1.0);
  CHECK_FALSE(none.note.empty());
}

TEST_CASE("single student") {
  const double cut = 3.0 / std::pow(4.0, 4.0 / 3.0);
  CHECK(single_student_cutoff(0.75) == doctest::Approx(cut).epsilon(1e-14));
  CHECK(solve_single_student(0.75, cut) == std::vector<double>{0.0, 0.75});
  CHECK(solve_single_student(0.75, 0.3) == std::vector<double>{0.75});
  CHECK(solve_single_student(0.75, 0.6) == std::vector<double>{0.0});
  const GameParams p = GameParams::create({0.75}, cut);
  CHECK(std::abs(utility(p, Profile({0.0}), 0) - utility(p, Profile({0.75}), 0)) <= 1e-12);
}
