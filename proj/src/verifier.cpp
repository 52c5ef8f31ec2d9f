#include "osp/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace osp {

namespace {

ProblemKind leaf_kind(const ExtensiveTree& tree) {
  std::optional<ProblemKind> kind;
  for (NodeId u : tree.bfs_order()) {
    if (!tree.node(u).is_leaf()) continue;
    const ProblemKind here = kind_of(tree.node(u).leaf().outcome.solution);
    if (!kind) {
      kind = here;
    } else if (*kind != here) {
      throw Error("tree mixes facility and scheduling outcomes");
    }
  }
  if (!kind) throw Error("tree has no leaves");
  return *kind;
}

struct NodeTask {
  std::size_t agent;
  NodeId node;
  std::size_t slot;  // position of `agent` within S(node)
};

struct TaskResult {
  std::vector<Counterexample> counterexamples;
  std::uint64_t pairs_checked = 0;
};

// Routed child edge and outcome for every profile compatible with a node.
struct NodeContext {
  std::vector<const TypeProfile*> profiles;  // lexicographic
  std::vector<EdgeId> edge;
  std::vector<std::uint64_t> rank;
};

TaskResult run_osp_task(const ExtensiveTree& tree, CostModel model, ProblemKind kind,
                        const NodeTask& task, const NodeContext& context,
                        const std::vector<Outcome>& outcomes, bool first_only) {
  TaskResult result;
  const std::size_t agent = task.agent;
  const auto& values = tree.domain().of(agent);

  std::vector<std::vector<std::size_t>> by_value(values.size());
  for (std::size_t local = 0; local < context.profiles.size(); ++local) {
    const Rational& declared = (*context.profiles[local])[agent];
    by_value[tree.domain().value_index(agent, declared)].push_back(local);
  }

  std::vector<std::optional<Rational>> honest_cost(context.profiles.size());
  const auto truthful = [&](std::size_t local) -> const Rational& {
    if (!honest_cost[local]) {
      const TypeProfile& profile = *context.profiles[local];
      const Outcome& outcome = outcomes[context.rank[local]];
      honest_cost[local] = agent_cost(model, kind, agent, profile[agent], profile[agent],
                                      outcome.solution, outcome.payments[agent]);
    }
    return *honest_cost[local];
  };

  std::vector<std::optional<Rational>> deviating_cost(context.profiles.size());
  for (std::size_t t_idx = 0; t_idx < values.size(); ++t_idx) {
    const auto& honest_group = by_value[t_idx];
    if (honest_group.empty()) continue;
    const Rational& true_type = values[t_idx];
    std::fill(deviating_cost.begin(), deviating_cost.end(), std::nullopt);
    for (std::size_t b_idx = 0; b_idx < values.size(); ++b_idx) {
      const auto& deviating_group = by_value[b_idx];
      if (deviating_group.empty()) continue;
      for (const std::size_t x : honest_group) {
        for (const std::size_t y : deviating_group) {
          if (context.edge[x] == context.edge[y]) continue;
          ++result.pairs_checked;
          if (!deviating_cost[y]) {
            const Outcome& outcome = outcomes[context.rank[y]];
            deviating_cost[y] =
                agent_cost(model, kind, agent, true_type, (*context.profiles[y])[agent],
                           outcome.solution, outcome.payments[agent]);
          }
          if (truthful(x) > *deviating_cost[y]) {
            result.counterexamples.push_back({agent, task.node, true_type, values[b_idx],
                                              *context.profiles[x], *context.profiles[y],
                                              truthful(x), *deviating_cost[y]});
            if (first_only) return result;
          }
        }
      }
    }
  }
  return result;
}

}  // namespace

std::string to_string(Property property) {
  switch (property) {
    case Property::Osp:
      return "osp";
    case Property::Sp:
      return "sp";
    case Property::Vp:
      return "vp";
  }
  return "unknown";
}

Verdict check_osp(const ExtensiveTree& tree, CostModel model, const VerifyOptions& options) {
  ValidationReport report = validate_tree(tree);
  if (!report.ok()) throw InvalidTreeError(std::move(report));

  const ProblemKind kind = leaf_kind(tree);
  const FullLabels labels(tree);
  const Domain& domain = tree.domain();

  const std::vector<TypeProfile> profiles = domain.all_profiles();
  std::vector<Outcome> outcomes;
  outcomes.reserve(profiles.size());
  for (const TypeProfile& profile : profiles) outcomes.push_back(outcome_of(tree, profile));

  // Per-node routing shared by every task on that node.
  std::vector<std::optional<NodeContext>> contexts(tree.node_count());
  const auto context_of = [&](NodeId u) -> const NodeContext& {
    if (!contexts[u]) {
      NodeContext context;
      for (const TypeProfile& profile : labels.incoming(u)) {
        context.profiles.push_back(&profile);
        context.rank.push_back(domain.profile_rank(profile));
        const InternalNode& internal = tree.node(u).internal();
        const TypeProfile tuple = project(profile, internal.agents);
        EdgeId routed = internal.children.front();
        for (EdgeId e : internal.children) {
          if (std::binary_search(tree.edge(e).label.begin(), tree.edge(e).label.end(), tuple)) {
            routed = e;
            break;
          }
        }
        context.edge.push_back(routed);
      }
      contexts[u] = std::move(context);
    }
    return *contexts[u];
  };

  std::vector<NodeTask> tasks;
  for (std::size_t agent = 0; agent < domain.agents(); ++agent) {
    for (NodeId u : tree.bfs_order()) {
      if (tree.node(u).is_leaf()) continue;
      const auto& queried = tree.node(u).internal().agents;
      const auto it = std::find(queried.begin(), queried.end(), agent);
      if (it != queried.end()) {
        tasks.push_back({agent, u, static_cast<std::size_t>(it - queried.begin())});
      }
    }
  }

  Verdict verdict;
  verdict.property = Property::Osp;

  if (options.first_only) {
    for (const NodeTask& task : tasks) {
      ++verdict.stats.nodes_visited;
      TaskResult result =
          run_osp_task(tree, model, kind, task, context_of(task.node), outcomes, true);
      verdict.stats.pairs_checked += result.pairs_checked;
      if (!result.counterexamples.empty()) {
        verdict.counterexamples = std::move(result.counterexamples);
        return verdict;
      }
    }
    return verdict;
  }

  std::vector<TaskResult> results(tasks.size());
  if (options.parallel && tasks.size() > 1) {
    for (NodeId u : tree.bfs_order()) {
      if (!tree.node(u).is_leaf()) context_of(u);
    }
    std::atomic<std::size_t> next{0};
    const std::size_t worker_count =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                       tasks.size()));
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t index = next.fetch_add(1);
          if (index >= tasks.size()) return;
          results[index] = run_osp_task(tree, model, kind, tasks[index],
                                        *contexts[tasks[index].node], outcomes, false);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  } else {
    for (std::size_t index = 0; index < tasks.size(); ++index) {
      results[index] =
          run_osp_task(tree, model, kind, tasks[index], context_of(tasks[index].node), outcomes,
                       false);
    }
  }

  verdict.stats.nodes_visited = tasks.size();
  for (TaskResult& result : results) {
    verdict.stats.pairs_checked += result.pairs_checked;
    std::move(result.counterexamples.begin(), result.counterexamples.end(),
              std::back_inserter(verdict.counterexamples));
  }
  return verdict;
}

Verdict check_strategyproof(const DirectMechanism& mechanism, const Domain& domain,
                            CostModel model, const VerifyOptions& options) {
  const std::vector<TypeProfile> profiles = domain.all_profiles();
  std::vector<Outcome> outcomes;
  outcomes.reserve(profiles.size());
  for (const TypeProfile& profile : profiles) outcomes.push_back(evaluate(mechanism, profile));

  Verdict verdict;
  verdict.property = Property::Sp;
  for (std::size_t agent = 0; agent < domain.agents(); ++agent) {
    for (const Rational& true_type : domain.of(agent)) {
      for (const Rational& deviation : domain.of(agent)) {
        for (std::uint64_t rank = 0; rank < profiles.size(); ++rank) {
          const TypeProfile& honest = profiles[rank];
          if (!(honest[agent] == true_type)) continue;
          TypeProfile deviating = honest;
          deviating[agent] = deviation;
          const std::uint64_t deviating_rank = domain.profile_rank(deviating);
          ++verdict.stats.pairs_checked;
          const Rational honest_cost =
              agent_cost(model, mechanism.problem, agent, true_type, true_type,
                         outcomes[rank].solution, outcomes[rank].payments[agent]);
          const Rational deviating_cost =
              agent_cost(model, mechanism.problem, agent, true_type, deviation,
                         outcomes[deviating_rank].solution,
                         outcomes[deviating_rank].payments[agent]);
          if (honest_cost > deviating_cost) {
            verdict.counterexamples.push_back({agent, std::nullopt, true_type, deviation, honest,
                                               deviating, honest_cost, deviating_cost});
            if (options.first_only) return verdict;
          }
        }
      }
    }
  }
  return verdict;
}

Verdict check_voluntary_participation(const DirectMechanism& mechanism, const Domain& domain,
                                      CostModel model, const VerifyOptions& options) {
  const std::vector<TypeProfile> profiles = domain.all_profiles();
  std::vector<Outcome> outcomes;
  outcomes.reserve(profiles.size());
  for (const TypeProfile& profile : profiles) outcomes.push_back(evaluate(mechanism, profile));

  Verdict verdict;
  verdict.property = Property::Vp;
  const Rational zero;
  for (std::size_t agent = 0; agent < domain.agents(); ++agent) {
    for (std::uint64_t rank = 0; rank < profiles.size(); ++rank) {
      const TypeProfile& profile = profiles[rank];
      const Outcome& outcome = outcomes[rank];
      ++verdict.stats.pairs_checked;
      const Rational cost = agent_cost(model, mechanism.problem, agent, profile[agent],
                                       profile[agent], outcome.solution, outcome.payments[agent]);
      if (cost > zero) {
        Counterexample cex;
        cex.agent = agent;
        cex.true_type = profile[agent];
        cex.honest_profile = profile;
        cex.honest_cost = cost;
        verdict.counterexamples.push_back(std::move(cex));
        if (options.first_only) return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace osp
