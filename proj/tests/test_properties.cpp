#include "doctest.h"

#include "property_suite.hpp"

using namespace curvegame::props;

namespace {

void expect_clean(const PropertyResult& r) {
  INFO(r.name);
  CHECK(r.cases == 1000);
  CHECK(r.violations == 0);
  CHECK(r.covered);
}

}  // namespace

TEST_CASE("grade identity") { expect_clean(grade_identity()); }

TEST_CASE("aggregate resource bounds") { expect_clean(aggregate_resource_bounds()); }

TEST_CASE("increasing differences in opponents' effort") { expect_clean(increasing_differences()); }

TEST_CASE("hardness indexation") { expect_clean(hardness_indexation()); }

TEST_CASE("negative spillovers") { expect_clean(negative_spillovers()); }

TEST_CASE("reply-set membership") { expect_clean(reply_membership()); }

TEST_CASE("extremal replies are monotone") { expect_clean(monotone_replies()); }

TEST_CASE("jump bracketing and indifference") { expect_clean(jump_bracketing()); }

TEST_CASE("enumerated equilibria: fixed points, chain and Pareto order") { expect_clean(equilibrium_chain_and_pareto()); }

TEST_CASE("no-show monotonicity in ability") { expect_clean(no_show_monotonicity()); }

TEST_CASE("k-vs-l don't-care grades and leisure") { expect_clean(dont_care_transition()); }

TEST_CASE("harder parameters raise the extremal equilibria") { expect_clean(hardness_raises_equilibria()); }

TEST_CASE("ability index is convex") { expect_clean(ability_index_convexity()); }

TEST_CASE("iterated replies bracket every equilibrium") { expect_clean(dynamics_bracket()); }
