#pragma once

#include <functional>
#include <vector>

#include "osp/core.hpp"
#include "osp/tree.hpp"

namespace osp {

// Direct-revelation mechanism with a sequential query order. `query_order`
// must be injective; it may skip agents (a dictatorship queries only the
// dictator), in which case the social choice and the payment rule must not
// depend on the unqueried coordinates. `payment_rule` sees the full declared
// profile and the declarations of the agents queried before `agent`, in
// query order.
struct DirectMechanism {
  ProblemKind problem = ProblemKind::Facility;
  std::vector<std::size_t> query_order;
  std::function<Solution(const TypeProfile&)> social_choice;
  std::function<Rational(std::size_t agent, const TypeProfile& declared,
                         const std::vector<Rational>& history)>
      payment_rule;
};

std::vector<std::size_t> identity_order(std::size_t agents);

// Solution and payments for a declared profile.
Outcome evaluate(const DirectMechanism& mechanism, const TypeProfile& declared);

// Extensive-form tree asking each agent in query order for its full type:
// one child edge per domain value, leaves carrying the mechanism outcome.
// Node and edge ids are assigned in BFS order. Coordinates of unqueried
// agents are fixed to the first value of their domain.
ExtensiveTree compile_direct(const DirectMechanism& mechanism, const Domain& domain);

// First-price rule on top of an arbitrary social choice: every agent is paid
// its declared solution cost, so the truthful Monitoring cost is zero.
DirectMechanism first_price(ProblemKind problem, std::size_t agents,
                            std::function<Solution(const TypeProfile&)> social_choice);

}  // namespace osp
