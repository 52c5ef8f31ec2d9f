#pragma once

#include <random>
#include <vector>

#include "osp/core.hpp"
#include "osp/mechanism.hpp"
#include "osp/tree.hpp"

namespace testsupport {

// Two-agent tree over {0,1}^2 whose root sends profile (1,·) down both
// edges: an overlap violation.
inline osp::ExtensiveTree overlap_fixture() {
  using namespace osp;
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  const Outcome outcome{FacilityPoint{Rational(0)}, {Rational(0), Rational(0)}};
  std::vector<Node> nodes{Node{InternalNode{{0}, {0, 1}}}, Node{LeafNode{outcome}},
                          Node{LeafNode{outcome}}};
  std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}, {Rational(1)}}},
                          Edge{0, 2, {{Rational(1)}}}};
  return ExtensiveTree(domain, std::move(nodes), std::move(edges), 0);
}

// Two-agent tree over {0,1}^2 whose root covers only declaration 0: an
// exhaustiveness gap.
inline osp::ExtensiveTree gap_fixture() {
  using namespace osp;
  const Domain domain = Domain::uniform(2, {Rational(0), Rational(1)});
  const Outcome outcome{FacilityPoint{Rational(0)}, {Rational(0), Rational(0)}};
  std::vector<Node> nodes{Node{InternalNode{{0}, {0}}}, Node{LeafNode{outcome}}};
  std::vector<Edge> edges{Edge{0, 1, {{Rational(0)}}}};
  return ExtensiveTree(domain, std::move(nodes), std::move(edges), 0);
}

// All generators take the engine by reference so suites stay reproducible
// from their fixed seeds.

inline osp::Domain random_grid(std::mt19937_64& rng, std::size_t agents, std::size_t size,
                               long lo, long hi) {
  std::vector<std::vector<osp::Rational>> per_agent;
  per_agent.reserve(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    std::vector<osp::Rational> values;
    while (values.size() < size) {
      const long pick = lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
      osp::Rational value(pick);
      bool fresh = true;
      for (const auto& existing : values) {
        if (existing == value) {
          fresh = false;
          break;
        }
      }
      if (fresh) values.push_back(std::move(value));
    }
    std::sort(values.begin(), values.end());
    per_agent.push_back(std::move(values));
  }
  return osp::Domain(std::move(per_agent));
}

// Arbitrary facility rule: each profile is mapped to an independently drawn
// grid value of a random agent.
inline osp::DirectMechanism random_facility_first_price(std::mt19937_64& rng,
                                                        const osp::Domain& grid) {
  std::vector<osp::Rational> choices;
  choices.reserve(grid.profile_count());
  for (std::uint64_t rank = 0; rank < grid.profile_count(); ++rank) {
    const std::size_t agent = rng() % grid.agents();
    const auto& values = grid.of(agent);
    choices.push_back(values[rng() % values.size()]);
  }
  auto rule = [grid, choices](const osp::TypeProfile& declared) -> osp::Solution {
    return osp::FacilityPoint{choices[grid.profile_rank(declared)]};
  };
  return osp::first_price(osp::ProblemKind::Facility, grid.agents(), std::move(rule));
}

// Arbitrary scheduling rule: each profile is mapped to an independently
// drawn assignment of the given jobs to machines.
inline osp::DirectMechanism random_scheduling_first_price(std::mt19937_64& rng,
                                                          const osp::Domain& domain,
                                                          const std::vector<osp::Rational>& jobs) {
  std::vector<osp::Schedule> choices;
  choices.reserve(domain.profile_count());
  for (std::uint64_t rank = 0; rank < domain.profile_count(); ++rank) {
    osp::Schedule schedule;
    schedule.loads.assign(domain.agents(), osp::Rational(0));
    for (const osp::Rational& job : jobs) {
      schedule.loads[rng() % domain.agents()] += job;
    }
    choices.push_back(std::move(schedule));
  }
  auto rule = [domain, choices](const osp::TypeProfile& declared) -> osp::Solution {
    return choices[domain.profile_rank(declared)];
  };
  return osp::first_price(osp::ProblemKind::Scheduling, domain.agents(), std::move(rule));
}

// Non-empty random subset of every agent's values.
inline osp::Domain random_subdomain(std::mt19937_64& rng, const osp::Domain& domain) {
  std::vector<std::vector<osp::Rational>> per_agent;
  per_agent.reserve(domain.agents());
  for (std::size_t i = 0; i < domain.agents(); ++i) {
    const auto& values = domain.of(i);
    std::vector<osp::Rational> keep;
    for (const auto& value : values) {
      if (rng() % 2 == 0) keep.push_back(value);
    }
    if (keep.empty()) keep.push_back(values[rng() % values.size()]);
    per_agent.push_back(std::move(keep));
  }
  return osp::Domain(std::move(per_agent));
}

}  // namespace testsupport
