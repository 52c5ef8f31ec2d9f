#include <doctest.h>

#include "osp/tree.hpp"
#include "support.hpp"

using namespace osp;

namespace {

Outcome facility_outcome(long x, std::size_t agents) {
  return Outcome{FacilityPoint{Rational(x)}, std::vector<Rational>(agents, Rational(0))};
}

// Root queries both agents at once over {0,1}^2; (1,1) splits off.
ExtensiveTree pair_query_tree() {
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  std::vector<Node> nodes{Node{InternalNode{{0, 1}, {0, 1}}},
                          Node{LeafNode{facility_outcome(0, 2)}},
                          Node{LeafNode{facility_outcome(1, 2)}}};
  std::vector<Edge> edges{
      Edge{0, 1, {{Rational(0), Rational(0)}, {Rational(0), Rational(1)},
                  {Rational(1), Rational(0)}}},
      Edge{0, 2, {{Rational(1), Rational(1)}}}};
  return ExtensiveTree(domain, std::move(nodes), std::move(edges), 0);
}

}  // namespace

TEST_CASE("construction rejects broken structure") {
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  const Outcome outcome = facility_outcome(0, 2);

  SUBCASE("no nodes") {
    CHECK_THROWS_AS(ExtensiveTree(domain, {}, {}, 0), TreeStructureError);
  }
  SUBCASE("unreachable node") {
    std::vector<Node> nodes{Node{LeafNode{outcome}}, Node{LeafNode{outcome}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), {}, 0), TreeStructureError);
  }
  SUBCASE("two incoming edges") {
    std::vector<Node> nodes{Node{InternalNode{{0}, {0, 1}}}, Node{LeafNode{outcome}}};
    std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}}}, Edge{0, 1, {{Rational(1)}}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), std::move(edges), 0),
                    TreeStructureError);
  }
  SUBCASE("internal node without children") {
    std::vector<Node> nodes{Node{InternalNode{{0}, {}}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), {}, 0), TreeStructureError);
  }
  SUBCASE("label arity mismatch") {
    std::vector<Node> nodes{Node{InternalNode{{0}, {0}}}, Node{LeafNode{outcome}}};
    std::vector<Edge> edges{Edge{0, 1, {{Rational(0), Rational(1)}}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), std::move(edges), 0),
                    TreeStructureError);
  }
  SUBCASE("payment arity mismatch") {
    std::vector<Node> nodes{Node{LeafNode{facility_outcome(0, 3)}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), {}, 0), TreeStructureError);
  }
  SUBCASE("query set not strictly increasing") {
    std::vector<Node> nodes{Node{InternalNode{{1, 0}, {0}}}, Node{LeafNode{outcome}}};
    std::vector<Edge> edges{Edge{0, 1, {{Rational(0), Rational(0)}}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), std::move(edges), 0),
                    TreeStructureError);
  }
  SUBCASE("agent out of range") {
    std::vector<Node> nodes{Node{InternalNode{{7}, {0}}}, Node{LeafNode{outcome}}};
    std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}}}};
    CHECK_THROWS_AS(ExtensiveTree(domain, std::move(nodes), std::move(edges), 0),
                    TreeStructureError);
  }
}

TEST_CASE("single-leaf tree returns its outcome everywhere and is trivial") {
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  ExtensiveTree tree(domain, {Node{LeafNode{facility_outcome(1, 2)}}}, {}, 0);
  CHECK(validate_tree(tree).ok());
  for (const TypeProfile& profile : domain.all_profiles()) {
    CHECK(outcome_of(tree, profile) == facility_outcome(1, 2));
    CHECK(compatible(tree, 0, profile));
  }
  CHECK(is_trivial(tree));
  CHECK(!divergent_agent(tree).has_value());
}

TEST_CASE("simultaneous two-agent query validates and routes") {
  const ExtensiveTree tree = pair_query_tree();
  CHECK(validate_tree(tree).ok());

  CHECK(outcome_of(tree, {Rational(0), Rational(1)}) == facility_outcome(0, 2));
  CHECK(outcome_of(tree, {Rational(1), Rational(1)}) == facility_outcome(1, 2));

  CHECK(compatible(tree, 2, {Rational(1), Rational(1)}));
  CHECK(!compatible(tree, 2, {Rational(1), Rational(0)}));
  CHECK(compatible(tree, 1, {Rational(1), Rational(0)}));

  CHECK(diverge(tree, 0, {Rational(0), Rational(0)}, {Rational(1), Rational(1)}));
  CHECK(!diverge(tree, 0, {Rational(0), Rational(0)}, {Rational(1), Rational(0)}));
  // divergence needs compatibility
  CHECK_THROWS_AS(diverge(tree, 2, {Rational(0), Rational(0)}, {Rational(1), Rational(1)}),
                  Error);
  // leaves never diverge
  CHECK(!diverge(tree, 1, {Rational(0), Rational(0)}, {Rational(1), Rational(0)}));

  CHECK(!is_trivial(tree));
  const auto divergence = divergent_agent(tree);
  REQUIRE(divergence.has_value());
  CHECK(divergence->node == 0);
  CHECK(divergence->agent == 0);

  const auto label = full_label(tree, 1);
  REQUIRE(label.size() == 1);
  CHECK(label[0] == TypeProfile{Rational(1), Rational(1)});
  CHECK(full_label(tree, 0).size() == 3);
}

TEST_CASE("overlap fixture is reported with witness and both edges") {
  const ValidationReport report = validate_tree(testsupport::overlap_fixture());
  REQUIRE(!report.ok());
  REQUIRE(report.violations.size() == 2);
  const Violation& first = report.violations.front();
  CHECK(first.kind == ViolationKind::Overlap);
  CHECK(first.node == 0);
  CHECK(first.edges == std::vector<EdgeId>{0, 1});
  REQUIRE(first.witness.has_value());
  CHECK(*first.witness == TypeProfile{Rational(1), Rational(0)});
}

TEST_CASE("gap fixture is reported with the unmatched profile") {
  const ValidationReport report = validate_tree(testsupport::gap_fixture());
  REQUIRE(!report.ok());
  REQUIRE(report.violations.size() == 2);
  const Violation& first = report.violations.front();
  CHECK(first.kind == ViolationKind::Gap);
  CHECK(first.node == 0);
  REQUIRE(first.witness.has_value());
  CHECK(*first.witness == TypeProfile{Rational(1), Rational(0)});
}

TEST_CASE("re-querying an excluded value yields an empty full label") {
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  std::vector<Node> nodes{Node{InternalNode{{0}, {0, 1}}}, Node{InternalNode{{0}, {2, 3}}},
                          Node{LeafNode{facility_outcome(0, 2)}},
                          Node{LeafNode{facility_outcome(0, 2)}},
                          Node{LeafNode{facility_outcome(1, 2)}}};
  std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}}}, Edge{0, 4, {{Rational(1)}}},
                          Edge{1, 2, {{Rational(0)}}}, Edge{1, 3, {{Rational(1)}}}};
  const ExtensiveTree tree(domain, std::move(nodes), std::move(edges), 0);
  const ValidationReport report = validate_tree(tree);
  REQUIRE(!report.ok());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::EmptyLabel);
  CHECK(report.violations[0].node == 1);
  CHECK(report.violations[0].edges == std::vector<EdgeId>{3});
}

TEST_CASE("label values outside the domain are flagged") {
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  std::vector<Node> nodes{Node{InternalNode{{0}, {0, 1}}},
                          Node{LeafNode{facility_outcome(0, 2)}},
                          Node{LeafNode{facility_outcome(1, 2)}}};
  std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}}},
                          Edge{0, 2, {{Rational(1)}, {Rational(5)}}}};
  const ExtensiveTree tree(domain, std::move(nodes), std::move(edges), 0);
  const ValidationReport report = validate_tree(tree);
  REQUIRE(!report.ok());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == ViolationKind::BadLabelValue);
  CHECK(report.violations[0].edges == std::vector<EdgeId>{1});
}

TEST_CASE("edge labels are canonicalized on construction") {
  const Domain domain = Domain::uniform(1, {Rational(0), Rational(1)});
  std::vector<Node> nodes{Node{InternalNode{{0}, {0}}}, Node{LeafNode{facility_outcome(0, 1)}}};
  std::vector<Edge> edges{
      Edge{0, 1, {{Rational(1)}, {Rational(0)}, {Rational(1)}}}};
  const ExtensiveTree tree(domain, std::move(nodes), std::move(edges), 0);
  REQUIRE(tree.edge(0).label.size() == 2);
  CHECK(tree.edge(0).label[0] == TypeProfile{Rational(0)});
  CHECK(tree.edge(0).label[1] == TypeProfile{Rational(1)});
  CHECK(validate_tree(tree).ok());
}
