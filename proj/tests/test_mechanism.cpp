#include <doctest.h>

#include <random>

#include "osp/mechanism.hpp"
#include "support.hpp"

using namespace osp;

namespace {

Solution leftmost_median_rule(const TypeProfile& declared) {
  TypeProfile sorted = declared;
  std::sort(sorted.begin(), sorted.end());
  return FacilityPoint{sorted[(sorted.size() + 1) / 2 - 1]};
}

}  // namespace

TEST_CASE("query order must be injective and in range") {
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.social_choice = leftmost_median_rule;
  mechanism.payment_rule = [](std::size_t, const TypeProfile&, const std::vector<Rational>&) {
    return Rational(0);
  };
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});

  mechanism.query_order = {0, 0};
  CHECK_THROWS_AS(compile_direct(mechanism, domain), Error);
  mechanism.query_order = {0, 5};
  CHECK_THROWS_AS(compile_direct(mechanism, domain), Error);
  mechanism.query_order = {1, 0};
  CHECK(validate_tree(compile_direct(mechanism, domain)).ok());
}

TEST_CASE("payment rules see the query prefix in order") {
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = {2, 0, 1};
  mechanism.social_choice = leftmost_median_rule;
  // pay each agent the sum of the declarations made before it
  mechanism.payment_rule = [](std::size_t, const TypeProfile&,
                              const std::vector<Rational>& history) {
    Rational sum;
    for (const Rational& h : history) sum += h;
    return sum;
  };
  const Outcome outcome = evaluate(mechanism, {Rational(1), Rational(2), Rational(4)});
  CHECK(outcome.payments[2] == Rational(0));
  CHECK(outcome.payments[0] == Rational(4));
  CHECK(outcome.payments[1] == Rational(5));
}

TEST_CASE("compiled tree shape: one level per queried agent, BFS ids") {
  const Domain domain({{Rational(0), Rational(1)}, {Rational(0), Rational(1), Rational(2)}});
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = {0, 1};
  mechanism.social_choice = leftmost_median_rule;
  mechanism.payment_rule = [](std::size_t, const TypeProfile&, const std::vector<Rational>&) {
    return Rational(0);
  };
  const ExtensiveTree tree = compile_direct(mechanism, domain);

  // 1 root + 2 second-level nodes + 6 leaves
  CHECK(tree.node_count() == 9);
  CHECK(tree.edge_count() == 8);
  CHECK(tree.root() == 0);
  CHECK(!tree.node(0).is_leaf());
  CHECK(tree.node(0).internal().agents == std::vector<std::size_t>{0});
  CHECK(!tree.node(1).is_leaf());
  CHECK(tree.node(1).internal().agents == std::vector<std::size_t>{1});
  for (NodeId u = 3; u < 9; ++u) CHECK(tree.node(u).is_leaf());
  for (std::size_t i = 0; i < tree.bfs_order().size(); ++i) {
    CHECK(tree.bfs_order()[i] == i);
  }
  CHECK(validate_tree(tree).ok());
}

TEST_CASE("compiled trees reproduce the direct mechanism on every profile") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 5; ++round) {
    const Domain grid = testsupport::random_grid(rng, 3, 3, 0, 12);
    const DirectMechanism mechanism = testsupport::random_facility_first_price(rng, grid);
    const ExtensiveTree tree = compile_direct(mechanism, grid);
    CHECK(validate_tree(tree).ok());
    for (const TypeProfile& profile : grid.all_profiles()) {
      CHECK(outcome_of(tree, profile) == evaluate(mechanism, profile));
    }
  }
}

TEST_CASE("first-price payments equal the declared solution cost") {
  const Domain grid = Domain::uniform(3, {Rational(2), Rational(5), Rational(9)});
  const DirectMechanism mechanism =
      first_price(ProblemKind::Facility, 3, leftmost_median_rule);
  const Outcome outcome = evaluate(mechanism, {Rational(2), Rational(5), Rational(9)});
  CHECK(std::get<FacilityPoint>(outcome.solution).x == Rational(5));
  CHECK(outcome.payments == std::vector<Rational>{Rational(3), Rational(0), Rational(4)});

  for (const TypeProfile& profile : grid.all_profiles()) {
    const Outcome here = evaluate(mechanism, profile);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(here.payments[i] ==
            solution_cost(ProblemKind::Facility, i, profile[i], here.solution));
      CHECK(agent_cost(CostModel::Monitoring, ProblemKind::Facility, i, profile[i], profile[i],
                       here.solution, here.payments[i]) == Rational(0));
    }
  }
}

TEST_CASE("partial query orders ignore unqueried coordinates") {
  const Domain domain = Domain::uniform(3, {Rational(0), Rational(1)});
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = {1};
  mechanism.social_choice = [](const TypeProfile& declared) -> Solution {
    return FacilityPoint{declared[1]};
  };
  mechanism.payment_rule = [](std::size_t, const TypeProfile&, const std::vector<Rational>&) {
    return Rational(0);
  };
  const ExtensiveTree tree = compile_direct(mechanism, domain);
  CHECK(tree.node_count() == 3);
  CHECK(validate_tree(tree).ok());
  for (const TypeProfile& profile : domain.all_profiles()) {
    CHECK(outcome_of(tree, profile) == evaluate(mechanism, profile));
  }
}
