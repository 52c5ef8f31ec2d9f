#include "osp/scheduling.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace osp::sched {

SchedulingInstance::SchedulingInstance(std::size_t n_in, std::vector<Rational> jobs_in,
                                       Domain domain_in, std::uint64_t budget_in)
    : n(n_in), jobs(std::move(jobs_in)), domain(std::move(domain_in)), budget(budget_in) {
  if (n == 0) throw Error("scheduling instance needs at least one machine");
  if (jobs.empty()) throw Error("scheduling instance needs at least one job");
  for (const Rational& job : jobs) {
    if (!(Rational(0) < job)) throw Error("job loads must be positive");
  }
  if (domain.agents() != n) throw Error("scheduling domain arity does not match n");
}

Rational makespan(const Schedule& schedule, const TypeProfile& types) {
  if (schedule.loads.size() != types.size() || types.empty()) {
    throw Error("makespan needs matching non-empty loads and types");
  }
  Rational worst = types[0] * schedule.loads[0];
  for (std::size_t i = 1; i < types.size(); ++i) {
    worst = max(worst, types[i] * schedule.loads[i]);
  }
  return worst;
}

namespace {

std::uint64_t assignment_count_capped(std::size_t machines, std::size_t jobs,
                                      std::uint64_t cap) {
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < jobs; ++j) {
    if (count > cap / machines) return cap + 1;
    count *= machines;
  }
  return count;
}

struct BestAssignment {
  bool found = false;
  Rational makespan;
  std::vector<std::size_t> assignment;
};

// Scans every assignment with the first job fixed, in lexicographic order.
void scan_prefix(const SchedulingInstance& instance, const TypeProfile& types,
                 std::size_t first_machine, BestAssignment& best) {
  const std::size_t m = instance.jobs.size();
  std::vector<std::size_t> assignment(m, 0);
  assignment[0] = first_machine;
  std::vector<Rational> loads(instance.n);
  while (true) {
    std::fill(loads.begin(), loads.end(), Rational(0));
    for (std::size_t j = 0; j < m; ++j) loads[assignment[j]] += instance.jobs[j];
    const Rational cost = makespan(Schedule{loads}, types);
    if (!best.found || cost < best.makespan) {
      best.found = true;
      best.makespan = cost;
      best.assignment = assignment;
    }
    std::size_t pos = m;
    while (pos > 1) {
      --pos;
      if (++assignment[pos] < instance.n) break;
      assignment[pos] = 0;
      if (pos == 1) return;
    }
    if (m == 1) return;
  }
}

}  // namespace

Schedule optimal_assignment(const SchedulingInstance& instance, const TypeProfile& types) {
  if (types.size() != instance.n) throw Error("type profile arity does not match the instance");
  const std::size_t m = instance.jobs.size();
  if (assignment_count_capped(instance.n, m, instance.budget) > instance.budget) {
    throw BudgetExceededError("assignment enumeration " + std::to_string(instance.n) + "^" +
                              std::to_string(m) + " exceeds the budget of " +
                              std::to_string(instance.budget) +
                              "; use a smaller instance or raise the budget");
  }

  std::vector<BestAssignment> per_prefix(instance.n);
  const std::size_t worker_count = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), instance.n));
  if (worker_count > 1 && m > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t first = next.fetch_add(1);
          if (first >= instance.n) return;
          scan_prefix(instance, types, first, per_prefix[first]);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  } else {
    for (std::size_t first = 0; first < instance.n; ++first) {
      scan_prefix(instance, types, first, per_prefix[first]);
    }
  }

  // Prefixes are merged in order, so ties keep the lexicographically
  // smallest assignment vector.
  BestAssignment best;
  for (const BestAssignment& candidate : per_prefix) {
    if (candidate.found && (!best.found || candidate.makespan < best.makespan)) {
      best = candidate;
    }
  }

  Schedule schedule;
  schedule.loads.assign(instance.n, Rational(0));
  for (std::size_t j = 0; j < m; ++j) schedule.loads[best.assignment[j]] += instance.jobs[j];
  return schedule;
}

MonotoneReport check_monotone(
    const std::function<Rational(const Rational& own, const Rational& other)>& allocation,
    const std::vector<Rational>& own_values, const std::vector<Rational>& other_values) {
  MonotoneReport report;
  for (const Rational& other : other_values) {
    for (const Rational& lo : own_values) {
      for (const Rational& hi : own_values) {
        if (!(lo < hi)) continue;
        ++report.pairs_checked;
        const Rational load_lo = allocation(lo, other);
        const Rational load_hi = allocation(hi, other);
        if (load_lo < load_hi) {
          report.violations.push_back({hi, lo, other, load_hi, load_lo});
        }
      }
    }
  }
  return report;
}

Rational step_load(const StepAllocation& alloc, const Rational& own) {
  if (alloc.upper < alloc.lower) throw Error("step allocation needs lower <= upper");
  if (own < alloc.lower) return Rational(2);
  if (own <= alloc.upper) return Rational(1);
  return Rational(0);
}

Rational threshold_payment(const StepAllocation& alloc, const Rational& own) {
  if (alloc.upper < alloc.lower) throw Error("step allocation needs lower <= upper");
  if (own < alloc.lower) return alloc.lower + alloc.upper;
  if (own <= alloc.upper) return alloc.upper;
  return Rational(0);
}

Rational allocation_curve_payment(const std::function<Rational(const Rational&)>& load,
                                  std::vector<Rational> breakpoints, const Rational& own) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  Rational tail_start = own;
  if (!breakpoints.empty()) tail_start = max(own, breakpoints.back());
  if (!(load(tail_start + Rational(1)) == Rational(0))) {
    throw Error("allocation does not vanish beyond its breakpoints; integral diverges");
  }

  Rational payment = own * load(own);
  Rational left = own;
  for (const Rational& right : breakpoints) {
    if (!(left < right)) continue;
    const Rational midpoint = (left + right) / Rational(2);
    payment += load(midpoint) * (right - left);
    left = right;
  }
  return payment;
}

LowerBoundReport scheduling_lower_bound(const Rational& a, const Rational& b, const Rational& k) {
  if (!(Rational(0) < a)) throw Error("scheduling_lower_bound needs a > 0");
  if (k < Rational(1) || !(k < Rational(2))) {
    throw Error("scheduling_lower_bound needs 1 <= k < 2");
  }
  if (!(k * k * a < b)) {
    throw Error("scheduling_lower_bound needs b > k^2 * a; the margin would not be positive");
  }

  const Rational two(2);
  const auto ranges = [&](const Rational& other) {
    return std::make_pair(std::make_pair(other / (two * k), k / two * other),
                          std::make_pair(two / k * other, two * k * other));
  };

  LowerBoundReport report;
  report.a = a;
  report.b = b;
  report.k = k;
  std::tie(report.lower_range_at_a, report.upper_range_at_a) = ranges(a);
  std::tie(report.lower_range_at_b, report.upper_range_at_b) = ranges(b);
  report.truthful_bound = a - two * k * a;
  report.deviating_bound = a - two / k * b;
  report.margin = report.truthful_bound - report.deviating_bound;
  if (!(Rational(0) < report.margin)) {
    throw Error("lower bound margin is not positive; parameters too tight");
  }
  return report;
}

DirectMechanism first_price_scheduler(const SchedulingInstance& instance) {
  return first_price(ProblemKind::Scheduling, instance.n,
                     [instance](const TypeProfile& declared) -> Solution {
                       return optimal_assignment(instance, declared);
                     });
}

}  // namespace osp::sched
