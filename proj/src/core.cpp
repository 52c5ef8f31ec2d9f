#include "osp/core.hpp"

#include <algorithm>
#include <limits>

namespace osp {

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::Facility ? "facility" : "scheduling";
}

std::string to_string(CostModel model) {
  return model == CostModel::Quasilinear ? "quasilinear" : "monitoring";
}

ProblemKind kind_of(const Solution& solution) {
  return std::holds_alternative<FacilityPoint>(solution) ? ProblemKind::Facility
                                                         : ProblemKind::Scheduling;
}

KindMismatchError::KindMismatchError(ProblemKind expected_kind, ProblemKind actual_kind)
    : Error("problem kind mismatch: expected " + to_string(expected_kind) + ", got " +
            to_string(actual_kind)),
      expected(expected_kind),
      actual(actual_kind) {}

Domain::Domain(std::vector<std::vector<Rational>> per_agent) : per_agent_(std::move(per_agent)) {
  if (per_agent_.empty()) throw Error("domain needs at least one agent");
  for (std::size_t i = 0; i < per_agent_.size(); ++i) {
    auto& values = per_agent_[i];
    if (values.empty()) {
      throw Error("domain of agent " + std::to_string(i) + " is empty");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
      throw Error("domain of agent " + std::to_string(i) + " is not sorted");
    }
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
      throw Error("domain of agent " + std::to_string(i) + " has duplicate values");
    }
  }
}

Domain Domain::uniform(std::size_t agents, std::vector<Rational> values) {
  return Domain(std::vector<std::vector<Rational>>(agents, std::move(values)));
}

const std::vector<Rational>& Domain::of(std::size_t agent) const {
  if (agent >= per_agent_.size()) throw Error("agent index out of range");
  return per_agent_[agent];
}

bool Domain::contains(std::size_t agent, const Rational& value) const {
  const auto& values = of(agent);
  return std::binary_search(values.begin(), values.end(), value);
}

bool Domain::contains(const TypeProfile& profile) const {
  if (profile.size() != agents()) return false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!contains(i, profile[i])) return false;
  }
  return true;
}

std::size_t Domain::value_index(std::size_t agent, const Rational& value) const {
  const auto& values = of(agent);
  const auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || !(*it == value)) {
    throw Error("value " + value.str() + " not in domain of agent " + std::to_string(agent));
  }
  return static_cast<std::size_t>(it - values.begin());
}

std::uint64_t Domain::profile_count() const {
  std::uint64_t count = 1;
  for (const auto& values : per_agent_) {
    const std::uint64_t size = values.size();
    if (count > std::numeric_limits<std::uint64_t>::max() / size) {
      throw Error("profile count overflows 64 bits");
    }
    count *= size;
  }
  return count;
}

std::vector<TypeProfile> Domain::all_profiles() const {
  std::vector<TypeProfile> out;
  out.reserve(profile_count());
  TypeProfile current(agents());
  std::vector<std::size_t> digit(agents(), 0);
  for (std::size_t i = 0; i < agents(); ++i) current[i] = per_agent_[i][0];
  while (true) {
    out.push_back(current);
    std::size_t pos = agents();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < per_agent_[pos].size()) {
        current[pos] = per_agent_[pos][digit[pos]];
        break;
      }
      digit[pos] = 0;
      current[pos] = per_agent_[pos][0];
      if (pos == 0) return out;
    }
  }
}

std::uint64_t Domain::profile_rank(const TypeProfile& profile) const {
  if (profile.size() != agents()) throw Error("profile arity mismatch");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < agents(); ++i) {
    rank = rank * per_agent_[i].size() + value_index(i, profile[i]);
  }
  return rank;
}

bool Domain::contains_domain(const Domain& sub) const {
  if (sub.agents() != agents()) return false;
  for (std::size_t i = 0; i < agents(); ++i) {
    for (const auto& value : sub.of(i)) {
      if (!contains(i, value)) return false;
    }
  }
  return true;
}

Rational solution_cost(ProblemKind kind, std::size_t agent, const Rational& type,
                       const Solution& solution) {
  if (kind_of(solution) != kind) throw KindMismatchError(kind, kind_of(solution));
  if (kind == ProblemKind::Facility) {
    return abs(type - std::get<FacilityPoint>(solution).x);
  }
  const auto& loads = std::get<Schedule>(solution).loads;
  if (agent >= loads.size()) throw Error("agent index out of range for schedule");
  return type * loads[agent];
}

Rational agent_cost(CostModel model, ProblemKind kind, std::size_t agent,
                    const Rational& true_type, const Rational& declared_type,
                    const Solution& solution, const Rational& payment) {
  const Rational true_cost = solution_cost(kind, agent, true_type, solution);
  if (model == CostModel::Quasilinear) return true_cost - payment;
  const Rational declared_cost = solution_cost(kind, agent, declared_type, solution);
  return max(true_cost, declared_cost) - payment;
}

}  // namespace osp
