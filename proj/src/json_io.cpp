#include "osp/json_io.hpp"

namespace osp::io {

namespace {

const json& expect_field(const json& value, const char* key) {
  const auto it = value.find(key);
  if (it == value.end()) throw Error(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t index_from_json(const json& value, const char* what) {
  if (!value.is_number_unsigned() && !value.is_number_integer()) {
    throw Error(std::string(what) + " must be a non-negative integer");
  }
  const auto raw = value.get<long long>();
  if (raw < 0) throw Error(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(raw);
}

}  // namespace

json to_json(const Rational& value) { return value.str(); }

Rational rational_from_json(const json& value) {
  if (value.is_number_integer() || value.is_number_unsigned()) {
    return Rational(static_cast<long>(value.get<long long>()));
  }
  if (value.is_string()) return Rational::parse(value.get<std::string>());
  if (value.is_number_float()) {
    throw Error("floating-point numbers are not accepted; write rationals as \"p/q\" strings");
  }
  throw Error("expected a rational (integer or \"p/q\" string), got " + value.dump());
}

json to_json(const TypeProfile& profile) {
  json out = json::array();
  for (const Rational& value : profile) out.push_back(to_json(value));
  return out;
}

TypeProfile profile_from_json(const json& value) {
  if (!value.is_array()) throw Error("expected an array of rationals");
  TypeProfile out;
  out.reserve(value.size());
  for (const json& item : value) out.push_back(rational_from_json(item));
  return out;
}

json to_json(const Domain& domain) {
  json out = json::array();
  for (std::size_t i = 0; i < domain.agents(); ++i) out.push_back(to_json(domain.of(i)));
  return out;
}

Domain domain_from_json(const json& value, std::size_t agents) {
  if (!value.is_array() || value.empty()) throw Error("domain must be a non-empty array");
  if (value.front().is_array()) {
    std::vector<std::vector<Rational>> per_agent;
    per_agent.reserve(value.size());
    for (const json& item : value) per_agent.push_back(profile_from_json(item));
    if (agents != 0 && per_agent.size() != agents) {
      throw Error("domain lists " + std::to_string(per_agent.size()) + " agents, expected " +
                  std::to_string(agents));
    }
    return Domain(std::move(per_agent));
  }
  if (agents == 0) throw Error("flat domain arrays need an explicit agent count");
  return Domain::uniform(agents, profile_from_json(value));
}

json to_json(const Solution& solution) {
  json out;
  if (const auto* facility_point = std::get_if<FacilityPoint>(&solution)) {
    out["kind"] = "facility";
    out["x"] = to_json(facility_point->x);
  } else {
    out["kind"] = "scheduling";
    out["loads"] = to_json(std::get<Schedule>(solution).loads);
  }
  return out;
}

Solution solution_from_json(const json& value) {
  const std::string kind = expect_field(value, "kind").get<std::string>();
  if (kind == "facility") return FacilityPoint{rational_from_json(expect_field(value, "x"))};
  if (kind == "scheduling") return Schedule{profile_from_json(expect_field(value, "loads"))};
  throw Error("unknown solution kind '" + kind + "'");
}

json to_json(const Outcome& outcome) {
  json out;
  out["solution"] = to_json(outcome.solution);
  out["payments"] = to_json(outcome.payments);
  return out;
}

Outcome outcome_from_json(const json& value) {
  Outcome out;
  out.solution = solution_from_json(expect_field(value, "solution"));
  out.payments = profile_from_json(expect_field(value, "payments"));
  return out;
}

json to_json(const ExtensiveTree& tree) {
  json out;
  out["domain"] = to_json(tree.domain());
  out["root"] = tree.root();
  json nodes = json::array();
  for (NodeId u = 0; u < tree.node_count(); ++u) {
    const Node& node = tree.node(u);
    json entry;
    entry["id"] = u;
    if (node.is_leaf()) {
      entry["kind"] = "leaf";
      entry["outcome"] = to_json(node.leaf().outcome);
    } else {
      entry["kind"] = "internal";
      entry["agents"] = node.internal().agents;
      entry["children"] = node.internal().children;
    }
    nodes.push_back(std::move(entry));
  }
  out["nodes"] = std::move(nodes);
  json edges = json::array();
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    const Edge& edge = tree.edge(e);
    json entry;
    entry["id"] = e;
    entry["from"] = edge.from;
    entry["to"] = edge.to;
    json label = json::array();
    for (const TypeProfile& tuple : edge.label) label.push_back(to_json(tuple));
    entry["label"] = std::move(label);
    edges.push_back(std::move(entry));
  }
  out["edges"] = std::move(edges);
  return out;
}

ExtensiveTree tree_from_json(const json& value) {
  Domain domain = domain_from_json(expect_field(value, "domain"));
  const json& node_list = expect_field(value, "nodes");
  const json& edge_list = expect_field(value, "edges");
  if (!node_list.is_array() || !edge_list.is_array()) {
    throw Error("tree nodes and edges must be arrays");
  }

  std::vector<Node> nodes(node_list.size(), Node{LeafNode{}});
  std::vector<bool> node_seen(node_list.size(), false);
  for (const json& entry : node_list) {
    const std::size_t id = index_from_json(expect_field(entry, "id"), "node id");
    if (id >= nodes.size() || node_seen[id]) {
      throw TreeStructureError("node ids must cover 0.." + std::to_string(nodes.size() - 1) +
                               " exactly once");
    }
    node_seen[id] = true;
    const std::string kind = expect_field(entry, "kind").get<std::string>();
    if (kind == "leaf") {
      nodes[id] = Node{LeafNode{outcome_from_json(expect_field(entry, "outcome"))}};
    } else if (kind == "internal") {
      InternalNode internal;
      for (const json& agent : expect_field(entry, "agents")) {
        internal.agents.push_back(index_from_json(agent, "agent id"));
      }
      for (const json& child : expect_field(entry, "children")) {
        internal.children.push_back(index_from_json(child, "edge id"));
      }
      nodes[id] = Node{std::move(internal)};
    } else {
      throw Error("unknown node kind '" + kind + "'");
    }
  }

  std::vector<Edge> edges(edge_list.size());
  std::vector<bool> edge_seen(edge_list.size(), false);
  for (const json& entry : edge_list) {
    const std::size_t id = index_from_json(expect_field(entry, "id"), "edge id");
    if (id >= edges.size() || edge_seen[id]) {
      throw TreeStructureError("edge ids must cover 0.." + std::to_string(edges.size() - 1) +
                               " exactly once");
    }
    edge_seen[id] = true;
    Edge edge;
    edge.from = index_from_json(expect_field(entry, "from"), "node id");
    edge.to = index_from_json(expect_field(entry, "to"), "node id");
    for (const json& tuple : expect_field(entry, "label")) {
      edge.label.push_back(profile_from_json(tuple));
    }
    edges[id] = std::move(edge);
  }

  const std::size_t root = index_from_json(expect_field(value, "root"), "root id");
  return ExtensiveTree(std::move(domain), std::move(nodes), std::move(edges), root);
}

json to_json(const ValidationReport& report) {
  json out;
  out["ok"] = report.ok();
  json violations = json::array();
  for (const Violation& violation : report.violations) {
    json entry;
    entry["kind"] = to_string(violation.kind);
    entry["node"] = violation.node;
    entry["edges"] = violation.edges;
    if (violation.witness) entry["witness"] = to_json(*violation.witness);
    entry["message"] = violation.message;
    violations.push_back(std::move(entry));
  }
  out["violations"] = std::move(violations);
  return out;
}

json to_json(const Verdict& verdict) {
  json out;
  out["property"] = to_string(verdict.property);
  out["holds"] = verdict.holds();
  json counterexamples = json::array();
  for (const Counterexample& cex : verdict.counterexamples) {
    json entry;
    entry["agent"] = cex.agent;
    if (cex.node) entry["node"] = *cex.node;
    entry["true_type"] = to_json(cex.true_type);
    if (cex.deviation) entry["deviation"] = to_json(*cex.deviation);
    entry["honest_profile"] = to_json(cex.honest_profile);
    if (cex.deviating_profile) entry["deviating_profile"] = to_json(*cex.deviating_profile);
    entry["honest_cost"] = to_json(cex.honest_cost);
    if (cex.deviating_cost) entry["deviating_cost"] = to_json(*cex.deviating_cost);
    counterexamples.push_back(std::move(entry));
  }
  out["counterexamples"] = std::move(counterexamples);
  out["stats"] = {{"nodes_visited", verdict.stats.nodes_visited},
                  {"pairs_checked", verdict.stats.pairs_checked}};
  return out;
}

json to_json(const facility::PrefixBounds& bounds) {
  json out;
  out["ell"] = bounds.ell;
  out["r"] = bounds.r;
  out["left"] = to_json(bounds.left);
  out["right"] = to_json(bounds.right);
  out["lo"] = to_json(bounds.lo);
  out["hi"] = to_json(bounds.hi);
  out["cap"] = to_json(bounds.cap);
  out["zero_payment"] = bounds.zero_payment;
  return out;
}

json to_json(const facility::PaymentTrace& trace) {
  json out;
  out["agent"] = trace.agent;
  out["position"] = trace.position;
  out["sorted_history"] = to_json(trace.sorted_history);
  out["bounds"] = to_json(trace.bounds);
  out["left_above_right"] = trace.left_above_right;
  out["payment"] = to_json(trace.payment);
  return out;
}

json to_json(const facility::ApproxReport& report) {
  json out;
  out["unbounded"] = report.unbounded;
  if (!report.unbounded) out["ratio"] = to_json(report.ratio);
  out["witness"] = to_json(report.witness);
  return out;
}

json to_json(const facility::FacilityInstance& instance) {
  json out;
  out["n"] = instance.n;
  out["a"] = to_json(instance.a);
  out["b"] = to_json(instance.b);
  out["grid"] = to_json(instance.grid);
  return out;
}

facility::FacilityInstance facility_instance_from_json(const json& value) {
  const std::size_t n = index_from_json(expect_field(value, "n"), "agent count");
  Rational a = rational_from_json(expect_field(value, "a"));
  Rational b = rational_from_json(expect_field(value, "b"));
  const auto grid_it = value.find("grid");
  if (grid_it != value.end()) {
    Domain grid = domain_from_json(*grid_it, n);
    return facility::FacilityInstance(n, std::move(a), std::move(b), std::move(grid));
  }
  const auto step_it = value.find("step");
  if (step_it != value.end()) {
    return facility::FacilityInstance::step_grid(n, std::move(a), std::move(b),
                                                 rational_from_json(*step_it));
  }
  throw Error("facility instance needs either 'grid' or 'step'");
}

json to_json(const sched::LowerBoundReport& report) {
  const auto range = [](const std::pair<Rational, Rational>& r) {
    return json::array({to_json(r.first), to_json(r.second)});
  };
  json out;
  out["a"] = to_json(report.a);
  out["b"] = to_json(report.b);
  out["k"] = to_json(report.k);
  out["lower_threshold_range_at_a"] = range(report.lower_range_at_a);
  out["upper_threshold_range_at_a"] = range(report.upper_range_at_a);
  out["lower_threshold_range_at_b"] = range(report.lower_range_at_b);
  out["upper_threshold_range_at_b"] = range(report.upper_range_at_b);
  out["truthful_bound"] = to_json(report.truthful_bound);
  out["deviating_bound"] = to_json(report.deviating_bound);
  out["margin"] = to_json(report.margin);
  return out;
}

json to_json(const sched::SchedulingInstance& instance) {
  json out;
  out["n"] = instance.n;
  out["jobs"] = to_json(instance.jobs);
  out["domain"] = to_json(instance.domain);
  out["budget"] = instance.budget;
  return out;
}

sched::SchedulingInstance scheduling_instance_from_json(const json& value) {
  const std::size_t n = index_from_json(expect_field(value, "n"), "machine count");
  std::vector<Rational> jobs = profile_from_json(expect_field(value, "jobs"));
  Domain domain = domain_from_json(expect_field(value, "domain"), n);
  std::uint64_t budget = 10'000'000;
  const auto budget_it = value.find("budget");
  if (budget_it != value.end()) {
    budget = static_cast<std::uint64_t>(index_from_json(*budget_it, "budget"));
  }
  return sched::SchedulingInstance(n, std::move(jobs), std::move(domain), budget);
}

}  // namespace osp::io
