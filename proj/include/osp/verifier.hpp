#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osp/mechanism.hpp"
#include "osp/tree.hpp"

namespace osp {

enum class Property { Osp, Sp, Vp };

std::string to_string(Property property);

// A violated inequality. For OSP, `node` is where the profiles diverge and
// `deviating_*` describe the branch the deviation reaches; for SP the two
// profiles differ only in the agent's coordinate; for VP only the honest
// side is populated and `honest_cost` is the positive truthful cost.
struct Counterexample {
  std::size_t agent = 0;
  std::optional<NodeId> node;
  Rational true_type;
  std::optional<Rational> deviation;
  TypeProfile honest_profile;
  std::optional<TypeProfile> deviating_profile;
  Rational honest_cost;
  std::optional<Rational> deviating_cost;
};

struct VerifyStats {
  std::uint64_t nodes_visited = 0;  // (agent, node) pairs examined
  std::uint64_t pairs_checked = 0;  // cost inequalities evaluated
};

struct Verdict {
  Property property = Property::Osp;
  std::vector<Counterexample> counterexamples;
  VerifyStats stats;
  bool holds() const { return counterexamples.empty(); }
};

struct VerifyOptions {
  bool first_only = false;  // stop at the first counterexample
  bool parallel = true;     // ignored when first_only is set
};

// Exhaustive obvious-strategyproofness check. Walks agents in increasing
// order and nodes in BFS order; at each node where the agent is queried it
// compares every honest context against every diverging deviation context,
// in lexicographic order, so counterexamples come out deterministically.
// Throws InvalidTreeError when validate_tree rejects the tree.
Verdict check_osp(const ExtensiveTree& tree, CostModel model, const VerifyOptions& options = {});

// Exhaustive strategyproofness check of the direct mechanism: every agent,
// true type, deviation and context, in lexicographic order.
Verdict check_strategyproof(const DirectMechanism& mechanism, const Domain& domain,
                            CostModel model, const VerifyOptions& options = {});

// Voluntary participation: the truthful cost of every agent on every profile
// must not exceed zero.
Verdict check_voluntary_participation(const DirectMechanism& mechanism, const Domain& domain,
                                      CostModel model, const VerifyOptions& options = {});

}  // namespace osp
