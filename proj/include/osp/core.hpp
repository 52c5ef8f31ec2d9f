#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "osp/rational.hpp"

namespace osp {

enum class ProblemKind { Facility, Scheduling };
enum class CostModel { Quasilinear, Monitoring };

std::string to_string(ProblemKind kind);
std::string to_string(CostModel model);

// One declared or true type per agent, indexed by agent id.
using TypeProfile = std::vector<Rational>;

struct FacilityPoint {
  Rational x;
  friend bool operator==(const FacilityPoint&, const FacilityPoint&) = default;
};

// Work assigned to each machine, indexed by agent id.
struct Schedule {
  std::vector<Rational> loads;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

using Solution = std::variant<FacilityPoint, Schedule>;

ProblemKind kind_of(const Solution& solution);

struct Outcome {
  Solution solution;
  std::vector<Rational> payments;  // one per agent; positive = agent receives money
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KindMismatchError : Error {
  KindMismatchError(ProblemKind expected, ProblemKind actual);
  ProblemKind expected;
  ProblemKind actual;
};

struct BudgetExceededError : Error {
  using Error::Error;
};

// Finite type domain: a sorted list of distinct admissible types per agent.
class Domain {
 public:
  explicit Domain(std::vector<std::vector<Rational>> per_agent);

  // Same sorted value list for every one of `agents` agents.
  static Domain uniform(std::size_t agents, std::vector<Rational> values);

  std::size_t agents() const { return per_agent_.size(); }
  const std::vector<Rational>& of(std::size_t agent) const;

  bool contains(std::size_t agent, const Rational& value) const;
  bool contains(const TypeProfile& profile) const;
  // Position of `value` in agent's sorted list; throws if absent.
  std::size_t value_index(std::size_t agent, const Rational& value) const;

  std::uint64_t profile_count() const;
  // All profiles in lexicographic order (agent 0 varies slowest).
  std::vector<TypeProfile> all_profiles() const;
  // Mixed-radix rank of `profile` within all_profiles(); throws if not contained.
  std::uint64_t profile_rank(const TypeProfile& profile) const;

  // True when every agent list of `sub` is a subset of this domain's list.
  bool contains_domain(const Domain& sub) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<std::vector<Rational>> per_agent_;
};

// Cost the solution imposes on an agent of the given type: distance to the
// facility, or the type (speed) times the load on the agent's machine.
Rational solution_cost(ProblemKind kind, std::size_t agent, const Rational& type,
                       const Solution& solution);

// Total cost of an agent with true type `true_type` who declared
// `declared_type` and received `payment`. Monitoring charges the worse of the
// true and the declared solution cost; Quasilinear charges the true one.
Rational agent_cost(CostModel model, ProblemKind kind, std::size_t agent,
                    const Rational& true_type, const Rational& declared_type,
                    const Solution& solution, const Rational& payment);

}  // namespace osp
