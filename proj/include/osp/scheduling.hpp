#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "osp/core.hpp"
#include "osp/mechanism.hpp"

namespace osp::sched {

// Related machines: n machines with a per-unit processing time each, and a
// fixed list of job loads to place on them.
struct SchedulingInstance {
  std::size_t n;
  std::vector<Rational> jobs;  // all positive
  Domain domain;               // admissible unit times per machine
  std::uint64_t budget = 10'000'000;

  SchedulingInstance(std::size_t n, std::vector<Rational> jobs, Domain domain,
                     std::uint64_t budget = 10'000'000);
};

Rational makespan(const Schedule& schedule, const TypeProfile& types);

// Minimum-makespan assignment by exhaustive enumeration of job->machine
// maps; ties break to the lexicographically smallest assignment vector.
// Throws BudgetExceededError when n^m exceeds the instance budget.
Schedule optimal_assignment(const SchedulingInstance& instance, const TypeProfile& types);

struct MonotoneViolation {
  Rational own_hi;   // slower declaration
  Rational own_lo;   // faster declaration
  Rational other;    // the fixed context
  Rational load_hi;  // load received when declaring own_hi
  Rational load_lo;
};

struct MonotoneReport {
  std::vector<MonotoneViolation> violations;
  std::uint64_t pairs_checked = 0;
  bool holds() const { return violations.empty(); }
};

// Two-machine monotonicity: the load of a machine must not grow when its
// unit time grows, for every fixed unit time of the other machine.
MonotoneReport check_monotone(
    const std::function<Rational(const Rational& own, const Rational& other)>& allocation,
    const std::vector<Rational>& own_values, const std::vector<Rational>& other_values);

// Two-machine step allocation: a machine receives both jobs below `lower`,
// one job between the thresholds, none above `upper`.
struct StepAllocation {
  Rational lower;
  Rational upper;
};

Rational step_load(const StepAllocation& alloc, const Rational& own);

// Closed-form threshold payment for the step allocation: lower+upper below
// `lower`, upper inside the step, zero above.
Rational threshold_payment(const StepAllocation& alloc, const Rational& own);

// Payment from the allocation curve itself: own*load(own) plus the exact
// area under the piecewise-constant load above `own`. The curve must be
// constant between consecutive `breakpoints` and zero beyond the last one;
// a non-zero tail raises an error (divergent integral).
Rational allocation_curve_payment(const std::function<Rational(const Rational&)>& load,
                                  std::vector<Rational> breakpoints, const Rational& own);

// Inequality chain behind the two-machine lower bound: with the other
// machine's unit time fixed at `a` or at `b`, any near-optimal allocation
// must place its thresholds inside the reported ranges, which forces the
// truthful cost above `truthful_bound` while a deviation caps the cost at
// `deviating_bound`. `margin` is their gap and must be positive.
struct LowerBoundReport {
  Rational a;
  Rational b;
  Rational k;
  std::pair<Rational, Rational> lower_range_at_a;
  std::pair<Rational, Rational> upper_range_at_a;
  std::pair<Rational, Rational> lower_range_at_b;
  std::pair<Rational, Rational> upper_range_at_b;
  Rational truthful_bound;
  Rational deviating_bound;
  Rational margin;
};

// Requires 1 <= k < 2 and b > k^2 * a > 0; the boundary b = k^2 * a loses
// strictness and is rejected.
LowerBoundReport scheduling_lower_bound(const Rational& a, const Rational& b, const Rational& k);

// First-price payments on top of the exact optimal assignment.
DirectMechanism first_price_scheduler(const SchedulingInstance& instance);

}  // namespace osp::sched
