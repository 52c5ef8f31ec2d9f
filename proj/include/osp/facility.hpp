#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "osp/core.hpp"
#include "osp/mechanism.hpp"

namespace osp::facility {

// Facility location on the segment [a, b] with one declared position per
// agent, restricted to a finite grid of admissible positions.
struct FacilityInstance {
  std::size_t n;
  Rational a;
  Rational b;
  Domain grid;  // grid.agents() == n, every value inside [a, b]

  FacilityInstance(std::size_t n, Rational a, Rational b, Domain grid);

  // Same grid values for every agent.
  static FacilityInstance uniform(std::size_t n, Rational a, Rational b,
                                  std::vector<Rational> values);
  // Evenly spaced grid {a, a+step, ..., b}; step must divide b-a.
  static FacilityInstance step_grid(std::size_t n, Rational a, Rational b, const Rational& step);
};

// Leftmost median: the element at 1-based index ceil(n/2) of the sorted
// profile. Unique median for odd n.
Rational median_location(const TypeProfile& profile);

// Sum of distances from every declared position to x.
Rational social_cost(const Rational& x, const TypeProfile& profile);

// The optimum is attained at the leftmost median.
std::pair<Rational, Rational> optimal_social_cost(const TypeProfile& profile);

// Median rule, no payments.
DirectMechanism median_zero_payment(const FacilityInstance& instance);

// Median rule with every agent paid its declared distance to the facility.
DirectMechanism first_price_median(const FacilityInstance& instance);

// Median rule with p_i = |x_i - f(x)| - (b - a): every agent is charged the
// interval width against its distance refund.
DirectMechanism interval_mechanism(const FacilityInstance& instance);

// Bounds the optimized interval mechanism derives for one agent from the
// sorted declarations of the k agents queried before it. `left`/`right`
// bracket the positions the median can still take once the agent declares
// far enough out; `lo`/`hi` delimit the declarations charged the flat `cap`;
// outside them the charge grows by the distance to the nearer delimiter.
struct PrefixBounds {
  long ell = 0;  // 1-based rank of `left` in the sorted history, may be < 1
  long r = 0;    // 1-based rank of `right`, may exceed the history length
  Rational left;
  Rational right;
  Rational lo;
  Rational hi;
  Rational cap;
  bool zero_payment = false;
  friend bool operator==(const PrefixBounds&, const PrefixBounds&) = default;
};

// `sorted_history` must be non-decreasing with fewer than instance.n entries.
PrefixBounds prefix_bounds(const std::vector<Rational>& sorted_history,
                           const FacilityInstance& instance);

// Optimized interval mechanism: median rule; each agent's payment follows
// prefix_bounds of its query prefix, with the zero-payment shortcut checked
// first. `query_order` must be a permutation of all agents.
DirectMechanism optimized_interval(const FacilityInstance& instance,
                                   std::vector<std::size_t> query_order);

struct PaymentTrace {
  std::size_t agent = 0;
  std::size_t position = 0;  // index in the query order
  std::vector<Rational> sorted_history;
  PrefixBounds bounds;
  bool left_above_right = false;  // anomalous histories; see prefix_bounds
  Rational payment;
};

std::vector<PaymentTrace> optimized_interval_trace(const FacilityInstance& instance,
                                                   const std::vector<std::size_t>& query_order,
                                                   const TypeProfile& declared);

// The dictator's declaration wins; nobody pays. Queries only the dictator.
DirectMechanism dictatorship(const FacilityInstance& instance, std::size_t dictator);

struct ApproxReport {
  bool unbounded = false;
  Rational ratio;       // meaningful when not unbounded
  TypeProfile witness;  // lexicographically smallest argmax, or the first
                        // profile with positive cost against optimum zero
};

// Worst-case ratio of the mechanism's social cost to the optimum over every
// grid profile. Profiles with optimum zero must get cost zero, otherwise the
// report is unbounded.
ApproxReport approximation_ratio(const DirectMechanism& mechanism,
                                 const FacilityInstance& instance);

// Closed interval of facility positions a k-approximate rule may choose on
// the profile (x at one agent, x - alpha at the n-1 others). Requires n >= 3,
// alpha > 0, k >= 1.
std::pair<Rational, Rational> admissible_interval(const Rational& x, const Rational& alpha,
                                                  const Rational& k, std::size_t n);

// Profile pair behind the (n-1)-approximation lower bound: agent i declares
// c+delta against everyone at c, then c against everyone at b_hi. Requires
// c + delta <= b_hi.
std::pair<TypeProfile, TypeProfile> lower_bound_profiles(const Rational& c, const Rational& delta,
                                                         const Rational& b_hi, std::size_t n,
                                                         std::size_t i);

// Largest grid step the lower-bound argument tolerates for a target epsilon.
Rational lower_bound_max_step(const Rational& eps, std::size_t n, const Rational& a,
                              const Rational& b);

// First ceil(n/2) agents at b-delta, the rest at a: the profile on which the
// optimized interval mechanism collects the fewest full charges.
TypeProfile frugality_profile(std::size_t n, const Rational& a, const Rational& b,
                              const Rational& delta);

}  // namespace osp::facility
