#include "osp/mechanism.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace osp {

namespace {

void check_query_order(const DirectMechanism& mechanism, std::size_t agents) {
  std::vector<bool> seen(agents, false);
  for (std::size_t agent : mechanism.query_order) {
    if (agent >= agents) throw Error("query order names an agent out of range");
    if (seen[agent]) throw Error("query order repeats agent " + std::to_string(agent));
    seen[agent] = true;
  }
}

}  // namespace

std::vector<std::size_t> identity_order(std::size_t agents) {
  std::vector<std::size_t> order(agents);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

Outcome evaluate(const DirectMechanism& mechanism, const TypeProfile& declared) {
  check_query_order(mechanism, declared.size());
  Outcome outcome;
  outcome.solution = mechanism.social_choice(declared);
  if (kind_of(outcome.solution) != mechanism.problem) {
    throw KindMismatchError(mechanism.problem, kind_of(outcome.solution));
  }
  outcome.payments.reserve(declared.size());
  for (std::size_t agent = 0; agent < declared.size(); ++agent) {
    const auto pos = std::find(mechanism.query_order.begin(), mechanism.query_order.end(), agent);
    std::vector<Rational> history;
    for (auto it = mechanism.query_order.begin(); it != pos; ++it) {
      history.push_back(declared[*it]);
    }
    outcome.payments.push_back(mechanism.payment_rule(agent, declared, history));
  }
  return outcome;
}

ExtensiveTree compile_direct(const DirectMechanism& mechanism, const Domain& domain) {
  check_query_order(mechanism, domain.agents());

  std::vector<Node> nodes;
  std::vector<Edge> edges;

  TypeProfile filler(domain.agents());
  for (std::size_t i = 0; i < domain.agents(); ++i) filler[i] = domain.of(i)[0];

  struct Pending {
    NodeId id;
    std::size_t depth;        // position in query_order
    TypeProfile assignment;   // queried prefix filled in, filler elsewhere
  };

  const auto make_node = [&](std::size_t depth, const TypeProfile& assignment) -> Node {
    if (depth == mechanism.query_order.size()) {
      return Node{LeafNode{evaluate(mechanism, assignment)}};
    }
    return Node{InternalNode{{mechanism.query_order[depth]}, {}}};
  };

  std::deque<Pending> queue;
  nodes.push_back(make_node(0, filler));
  queue.push_back({0, 0, filler});

  while (!queue.empty()) {
    Pending current = std::move(queue.front());
    queue.pop_front();
    if (current.depth == mechanism.query_order.size()) continue;
    const std::size_t agent = mechanism.query_order[current.depth];
    for (const Rational& value : domain.of(agent)) {
      TypeProfile next = current.assignment;
      next[agent] = value;
      const NodeId child = nodes.size();
      nodes.push_back(make_node(current.depth + 1, next));
      edges.push_back({current.id, child, {TypeProfile{value}}});
      std::get<InternalNode>(nodes[current.id].data).children.push_back(edges.size() - 1);
      queue.push_back({child, current.depth + 1, std::move(next)});
    }
  }
  return ExtensiveTree(domain, std::move(nodes), std::move(edges), 0);
}

DirectMechanism first_price(ProblemKind problem, std::size_t agents,
                            std::function<Solution(const TypeProfile&)> social_choice) {
  DirectMechanism mechanism;
  mechanism.problem = problem;
  mechanism.query_order = identity_order(agents);
  mechanism.social_choice = std::move(social_choice);
  mechanism.payment_rule = [problem, f = mechanism.social_choice](
                               std::size_t agent, const TypeProfile& declared,
                               const std::vector<Rational>&) {
    return solution_cost(problem, agent, declared[agent], f(declared));
  };
  return mechanism;
}

}  // namespace osp
