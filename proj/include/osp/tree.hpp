#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "osp/core.hpp"

namespace osp {

using NodeId = std::size_t;
using EdgeId = std::size_t;

// Internal node: queries the agents in S(u) simultaneously. `agents` is
// strictly increasing; `children` lists outgoing edges in branching order.
struct InternalNode {
  std::vector<std::size_t> agents;
  std::vector<EdgeId> children;
  friend bool operator==(const InternalNode&, const InternalNode&) = default;
};

struct LeafNode {
  Outcome outcome;
  friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

struct Node {
  std::variant<InternalNode, LeafNode> data;

  bool is_leaf() const { return std::holds_alternative<LeafNode>(data); }
  const InternalNode& internal() const { return std::get<InternalNode>(data); }
  const LeafNode& leaf() const { return std::get<LeafNode>(data); }

  friend bool operator==(const Node&, const Node&) = default;
};

// Edge labels are stored as projections onto S(from): each tuple assigns one
// type to every queried agent, in S(from) order. Tuples are kept sorted.
// Measurability of the full label holds by construction.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  std::vector<TypeProfile> label;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct TreeStructureError : Error {
  using Error::Error;
};

// Rooted extensive-form mechanism tree over a finite domain. Node and edge
// ids are indices into the node and edge lists. The constructor enforces the
// structural invariants (single root, unique parents, full reachability,
// well-formed queries and labels) and throws TreeStructureError otherwise;
// the semantic label constraints are checked by validate_tree.
class ExtensiveTree {
 public:
  ExtensiveTree(Domain domain, std::vector<Node> nodes, std::vector<Edge> edges, NodeId root);

  const Domain& domain() const { return domain_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  NodeId root() const { return root_; }
  std::optional<EdgeId> parent_edge(NodeId id) const;
  const std::vector<NodeId>& bfs_order() const { return bfs_; }

  friend bool operator==(const ExtensiveTree&, const ExtensiveTree&) = default;

 private:
  Domain domain_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  NodeId root_ = 0;
  std::vector<std::optional<EdgeId>> parent_;
  std::vector<NodeId> bfs_;
};

enum class ViolationKind {
  Overlap,        // a profile at a node matches two or more child edges
  Gap,            // a profile at a node matches no child edge
  EmptyLabel,     // an edge no compatible profile can traverse
  BadLabelValue,  // a label tuple uses a value outside the queried agent's domain
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId node = 0;
  std::vector<EdgeId> edges;
  std::optional<TypeProfile> witness;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Thrown by operations that require a tree validate_tree accepts.
struct InvalidTreeError : Error {
  explicit InvalidTreeError(ValidationReport report);
  ValidationReport report;
};

// Full labels of every node's incoming edge, materialized top-down; the root
// is assigned the whole domain. Requires a tree that validates.
class FullLabels {
 public:
  explicit FullLabels(const ExtensiveTree& tree);
  // Profiles compatible with the node, in lexicographic order.
  const std::vector<TypeProfile>& incoming(NodeId id) const;

 private:
  std::vector<std::vector<TypeProfile>> incoming_;
};

TypeProfile project(const TypeProfile& profile, const std::vector<std::size_t>& agents);

// Checks edge-label disjointness, exhaustiveness and non-emptiness on the
// materialized full labels, walking nodes in BFS order. Violations carry the
// node, the edges involved and a witness profile where applicable.
ValidationReport validate_tree(const ExtensiveTree& tree);

// Profiles that can traverse the edge: members of the source node's incoming
// set whose projection lies in the edge label.
std::vector<TypeProfile> full_label(const ExtensiveTree& tree, EdgeId id);

// Leaf outcome reached by following `profile` from the root.
Outcome outcome_of(const ExtensiveTree& tree, const TypeProfile& profile);

bool compatible(const ExtensiveTree& tree, NodeId id, const TypeProfile& profile);

// True when the two profiles, both compatible with the node, leave it along
// different edges. Leaves never diverge.
bool diverge(const ExtensiveTree& tree, NodeId id, const TypeProfile& first,
             const TypeProfile& second);

// Restriction of the tree to a subdomain: intersects labels with `sub`,
// drops edges and subtrees no remaining profile can reach, renumbers ids in
// BFS order.
ExtensiveTree prune(const ExtensiveTree& tree, const Domain& sub);

// True when no reachable node actually branches.
bool is_trivial(const ExtensiveTree& tree);

struct DivergencePoint {
  std::size_t agent = 0;
  NodeId node = 0;
};

// First BFS node with two reachable children, and the first queried agent
// whose declaration separates them. Empty for trivial trees.
std::optional<DivergencePoint> divergent_agent(const ExtensiveTree& tree);

}  // namespace osp
