#include "osp/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace osp {

namespace {

std::string profile_text(const TypeProfile& profile) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out << ",";
    out << profile[i];
  }
  out << ")";
  return out.str();
}

bool label_contains(const std::vector<TypeProfile>& label, const TypeProfile& tuple) {
  return std::binary_search(label.begin(), label.end(), tuple);
}

}  // namespace

ExtensiveTree::ExtensiveTree(Domain domain, std::vector<Node> nodes, std::vector<Edge> edges,
                             NodeId root)
    : domain_(std::move(domain)), nodes_(std::move(nodes)), edges_(std::move(edges)), root_(root) {
  const std::size_t n = domain_.agents();
  if (nodes_.empty()) throw TreeStructureError("tree has no nodes");
  if (root_ >= nodes_.size()) throw TreeStructureError("root id out of range");

  for (NodeId u = 0; u < nodes_.size(); ++u) {
    if (nodes_[u].is_leaf()) {
      const Outcome& outcome = nodes_[u].leaf().outcome;
      if (outcome.payments.size() != n) {
        throw TreeStructureError("leaf " + std::to_string(u) + " has " +
                                 std::to_string(outcome.payments.size()) + " payments, expected " +
                                 std::to_string(n));
      }
      if (const auto* schedule = std::get_if<Schedule>(&outcome.solution)) {
        if (schedule->loads.size() != n) {
          throw TreeStructureError("leaf " + std::to_string(u) + " schedule has wrong arity");
        }
      }
      continue;
    }
    const InternalNode& internal = nodes_[u].internal();
    if (internal.agents.empty()) {
      throw TreeStructureError("internal node " + std::to_string(u) + " queries no agent");
    }
    for (std::size_t j = 0; j < internal.agents.size(); ++j) {
      if (internal.agents[j] >= n) {
        throw TreeStructureError("internal node " + std::to_string(u) +
                                 " queries an agent out of range");
      }
      if (j > 0 && internal.agents[j - 1] >= internal.agents[j]) {
        throw TreeStructureError("internal node " + std::to_string(u) +
                                 " query set is not strictly increasing");
      }
    }
    if (internal.children.empty()) {
      throw TreeStructureError("internal node " + std::to_string(u) + " has no child edge");
    }
  }

  std::vector<int> child_refs(edges_.size(), 0);
  for (NodeId u = 0; u < nodes_.size(); ++u) {
    if (nodes_[u].is_leaf()) continue;
    for (EdgeId e : nodes_[u].internal().children) {
      if (e >= edges_.size()) {
        throw TreeStructureError("node " + std::to_string(u) + " references edge out of range");
      }
      if (edges_[e].from != u) {
        throw TreeStructureError("edge " + std::to_string(e) + " is listed by node " +
                                 std::to_string(u) + " but starts at node " +
                                 std::to_string(edges_[e].from));
      }
      ++child_refs[e];
    }
  }
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    if (child_refs[e] != 1) {
      throw TreeStructureError("edge " + std::to_string(e) + " appears in " +
                               std::to_string(child_refs[e]) + " child lists, expected 1");
    }
    if (edges_[e].to >= nodes_.size()) {
      throw TreeStructureError("edge " + std::to_string(e) + " ends out of range");
    }
    if (edges_[e].to == root_) {
      throw TreeStructureError("edge " + std::to_string(e) + " ends at the root");
    }
  }

  parent_.assign(nodes_.size(), std::nullopt);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    if (parent_[edges_[e].to]) {
      throw TreeStructureError("node " + std::to_string(edges_[e].to) + " has two incoming edges");
    }
    parent_[edges_[e].to] = e;
  }

  bfs_.clear();
  bfs_.reserve(nodes_.size());
  std::deque<NodeId> queue{root_};
  std::vector<bool> seen(nodes_.size(), false);
  seen[root_] = true;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    bfs_.push_back(u);
    if (nodes_[u].is_leaf()) continue;
    for (EdgeId e : nodes_[u].internal().children) {
      const NodeId v = edges_[e].to;
      if (seen[v]) throw TreeStructureError("node " + std::to_string(v) + " reached twice");
      seen[v] = true;
      queue.push_back(v);
    }
  }
  if (bfs_.size() != nodes_.size()) {
    throw TreeStructureError("tree has nodes unreachable from the root");
  }

  for (EdgeId e = 0; e < edges_.size(); ++e) {
    Edge& edge = edges_[e];
    const std::size_t arity = nodes_[edge.from].internal().agents.size();
    for (const TypeProfile& tuple : edge.label) {
      if (tuple.size() != arity) {
        throw TreeStructureError("edge " + std::to_string(e) + " has a label tuple of arity " +
                                 std::to_string(tuple.size()) + ", expected " +
                                 std::to_string(arity));
      }
    }
    std::sort(edge.label.begin(), edge.label.end());
    edge.label.erase(std::unique(edge.label.begin(), edge.label.end()), edge.label.end());
  }
}

const Node& ExtensiveTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw Error("node id out of range");
  return nodes_[id];
}

const Edge& ExtensiveTree::edge(EdgeId id) const {
  if (id >= edges_.size()) throw Error("edge id out of range");
  return edges_[id];
}

std::optional<EdgeId> ExtensiveTree::parent_edge(NodeId id) const {
  if (id >= nodes_.size()) throw Error("node id out of range");
  return parent_[id];
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Overlap:
      return "overlap";
    case ViolationKind::Gap:
      return "gap";
    case ViolationKind::EmptyLabel:
      return "empty_label";
    case ViolationKind::BadLabelValue:
      return "bad_label_value";
  }
  return "unknown";
}

InvalidTreeError::InvalidTreeError(ValidationReport bad)
    : Error("tree fails validation with " + std::to_string(bad.violations.size()) +
            " violation(s), first: " +
            (bad.violations.empty() ? std::string("none") : bad.violations.front().message)),
      report(std::move(bad)) {}

TypeProfile project(const TypeProfile& profile, const std::vector<std::size_t>& agents) {
  TypeProfile out;
  out.reserve(agents.size());
  for (std::size_t agent : agents) out.push_back(profile[agent]);
  return out;
}

FullLabels::FullLabels(const ExtensiveTree& tree) {
  incoming_.assign(tree.node_count(), {});
  incoming_[tree.root()] = tree.domain().all_profiles();
  for (NodeId u : tree.bfs_order()) {
    if (tree.node(u).is_leaf()) continue;
    const InternalNode& internal = tree.node(u).internal();
    for (const TypeProfile& profile : incoming_[u]) {
      const TypeProfile tuple = project(profile, internal.agents);
      for (EdgeId e : internal.children) {
        if (label_contains(tree.edge(e).label, tuple)) {
          incoming_[tree.edge(e).to].push_back(profile);
          break;
        }
      }
    }
  }
}

const std::vector<TypeProfile>& FullLabels::incoming(NodeId id) const {
  if (id >= incoming_.size()) throw Error("node id out of range");
  return incoming_[id];
}

ValidationReport validate_tree(const ExtensiveTree& tree) {
  ValidationReport report;
  const std::size_t n_nodes = tree.node_count();

  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    const Edge& edge = tree.edge(e);
    const auto& agents = tree.node(edge.from).internal().agents;
    for (const TypeProfile& tuple : edge.label) {
      for (std::size_t j = 0; j < agents.size(); ++j) {
        if (!tree.domain().contains(agents[j], tuple[j])) {
          report.violations.push_back(
              {ViolationKind::BadLabelValue, edge.from, {e}, std::nullopt,
               "edge " + std::to_string(e) + " labels agent " + std::to_string(agents[j]) +
                   " with " + tuple[j].str() + ", which is outside that agent's domain"});
        }
      }
    }
  }

  std::vector<std::vector<TypeProfile>> incoming(n_nodes);
  incoming[tree.root()] = tree.domain().all_profiles();
  for (NodeId u : tree.bfs_order()) {
    if (tree.node(u).is_leaf()) continue;
    const InternalNode& internal = tree.node(u).internal();
    for (const TypeProfile& profile : incoming[u]) {
      const TypeProfile tuple = project(profile, internal.agents);
      std::vector<EdgeId> matches;
      for (EdgeId e : internal.children) {
        if (label_contains(tree.edge(e).label, tuple)) matches.push_back(e);
      }
      if (matches.empty()) {
        report.violations.push_back({ViolationKind::Gap, u, {}, profile,
                                     "node " + std::to_string(u) + ": profile " +
                                         profile_text(profile) + " matches no child edge"});
      } else if (matches.size() > 1) {
        std::string edge_list;
        for (EdgeId e : matches) {
          if (!edge_list.empty()) edge_list += ", ";
          edge_list += std::to_string(e);
        }
        report.violations.push_back({ViolationKind::Overlap, u, matches, profile,
                                     "node " + std::to_string(u) + ": profile " +
                                         profile_text(profile) + " matches edges " + edge_list});
      }
      for (EdgeId e : matches) incoming[tree.edge(e).to].push_back(profile);
    }
    for (EdgeId e : internal.children) {
      if (incoming[tree.edge(e).to].empty()) {
        report.violations.push_back({ViolationKind::EmptyLabel, u, {e}, std::nullopt,
                                     "edge " + std::to_string(e) + " out of node " +
                                         std::to_string(u) + " has an empty full label"});
      }
    }
  }
  return report;
}

bool compatible(const ExtensiveTree& tree, NodeId id, const TypeProfile& profile) {
  if (!tree.domain().contains(profile)) {
    throw Error("profile " + profile_text(profile) + " is not in the domain");
  }
  NodeId u = id;
  while (true) {
    const auto parent = tree.parent_edge(u);
    if (!parent) return true;
    const Edge& edge = tree.edge(*parent);
    const auto& agents = tree.node(edge.from).internal().agents;
    if (!label_contains(edge.label, project(profile, agents))) return false;
    u = edge.from;
  }
}

std::vector<TypeProfile> full_label(const ExtensiveTree& tree, EdgeId id) {
  const NodeId to = tree.edge(id).to;
  std::vector<TypeProfile> out;
  for (const TypeProfile& profile : tree.domain().all_profiles()) {
    if (compatible(tree, to, profile)) out.push_back(profile);
  }
  return out;
}

namespace {

// Child edge `profile` leaves the internal node along; requires a tree whose
// labels are exhaustive at this node.
EdgeId routed_edge(const ExtensiveTree& tree, NodeId u, const TypeProfile& profile) {
  const InternalNode& internal = tree.node(u).internal();
  const TypeProfile tuple = project(profile, internal.agents);
  for (EdgeId e : internal.children) {
    if (label_contains(tree.edge(e).label, tuple)) return e;
  }
  throw Error("profile " + profile_text(profile) + " matches no child edge of node " +
              std::to_string(u) + "; run validate_tree");
}

}  // namespace

Outcome outcome_of(const ExtensiveTree& tree, const TypeProfile& profile) {
  if (!tree.domain().contains(profile)) {
    throw Error("profile " + profile_text(profile) + " is not in the domain");
  }
  NodeId u = tree.root();
  while (!tree.node(u).is_leaf()) {
    u = tree.edge(routed_edge(tree, u, profile)).to;
  }
  return tree.node(u).leaf().outcome;
}

bool diverge(const ExtensiveTree& tree, NodeId id, const TypeProfile& first,
             const TypeProfile& second) {
  if (!compatible(tree, id, first) || !compatible(tree, id, second)) {
    throw Error("diverge requires profiles compatible with the node");
  }
  if (tree.node(id).is_leaf()) return false;
  return routed_edge(tree, id, first) != routed_edge(tree, id, second);
}

ExtensiveTree prune(const ExtensiveTree& tree, const Domain& sub) {
  if (!tree.domain().contains_domain(sub)) {
    throw Error("prune domain is not a subdomain of the tree domain");
  }
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  struct Pending {
    NodeId old_id;
    NodeId new_id;
    std::vector<TypeProfile> incoming;
  };
  std::deque<Pending> queue;
  nodes.push_back(tree.node(tree.root()));
  if (!nodes.back().is_leaf()) std::get<InternalNode>(nodes.back().data).children.clear();
  queue.push_back({tree.root(), 0, sub.all_profiles()});

  while (!queue.empty()) {
    Pending current = std::move(queue.front());
    queue.pop_front();
    if (tree.node(current.old_id).is_leaf()) continue;
    const InternalNode& internal = tree.node(current.old_id).internal();
    for (EdgeId e : internal.children) {
      const Edge& old_edge = tree.edge(e);
      std::vector<TypeProfile> survivors;
      for (const TypeProfile& profile : current.incoming) {
        if (label_contains(old_edge.label, project(profile, internal.agents))) {
          survivors.push_back(profile);
        }
      }
      if (survivors.empty()) continue;
      std::vector<TypeProfile> new_label;
      for (const TypeProfile& tuple : old_edge.label) {
        bool inside = true;
        for (std::size_t j = 0; j < internal.agents.size(); ++j) {
          if (!sub.contains(internal.agents[j], tuple[j])) {
            inside = false;
            break;
          }
        }
        if (inside) new_label.push_back(tuple);
      }
      const NodeId new_to = nodes.size();
      nodes.push_back(tree.node(old_edge.to));
      if (!nodes.back().is_leaf()) std::get<InternalNode>(nodes.back().data).children.clear();
      edges.push_back({current.new_id, new_to, std::move(new_label)});
      std::get<InternalNode>(nodes[current.new_id].data).children.push_back(edges.size() - 1);
      queue.push_back({old_edge.to, new_to, std::move(survivors)});
    }
  }
  return ExtensiveTree(sub, std::move(nodes), std::move(edges), 0);
}

bool is_trivial(const ExtensiveTree& tree) {
  const FullLabels labels(tree);
  for (NodeId u : tree.bfs_order()) {
    if (tree.node(u).is_leaf()) continue;
    std::size_t live = 0;
    for (EdgeId e : tree.node(u).internal().children) {
      if (!labels.incoming(tree.edge(e).to).empty()) ++live;
    }
    if (live >= 2) return false;
  }
  return true;
}

std::optional<DivergencePoint> divergent_agent(const ExtensiveTree& tree) {
  const FullLabels labels(tree);
  for (NodeId u : tree.bfs_order()) {
    if (tree.node(u).is_leaf()) continue;
    const InternalNode& internal = tree.node(u).internal();
    std::vector<EdgeId> live;
    for (EdgeId e : internal.children) {
      if (!labels.incoming(tree.edge(e).to).empty()) live.push_back(e);
      if (live.size() == 2) break;
    }
    if (live.size() < 2) continue;
    const TypeProfile first = project(labels.incoming(tree.edge(live[0]).to).front(),
                                      internal.agents);
    const TypeProfile second = project(labels.incoming(tree.edge(live[1]).to).front(),
                                       internal.agents);
    for (std::size_t j = 0; j < internal.agents.size(); ++j) {
      if (!(first[j] == second[j])) return DivergencePoint{internal.agents[j], u};
    }
    throw Error("divergent edges share their first projections; run validate_tree");
  }
  return std::nullopt;
}

}  // namespace osp
