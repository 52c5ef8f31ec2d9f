#include "osp/facility.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace osp::facility {

FacilityInstance::FacilityInstance(std::size_t n_in, Rational a_in, Rational b_in, Domain grid_in)
    : n(n_in), a(std::move(a_in)), b(std::move(b_in)), grid(std::move(grid_in)) {
  if (n == 0) throw Error("facility instance needs at least one agent");
  if (!(a < b)) throw Error("facility interval needs a < b");
  if (grid.agents() != n) throw Error("facility grid arity does not match n");
  for (std::size_t i = 0; i < n; ++i) {
    for (const Rational& value : grid.of(i)) {
      if (value < a || b < value) {
        throw Error("grid value " + value.str() + " of agent " + std::to_string(i) +
                    " is outside [" + a.str() + ", " + b.str() + "]");
      }
    }
  }
}

FacilityInstance FacilityInstance::uniform(std::size_t n, Rational a, Rational b,
                                           std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  Domain grid = Domain::uniform(n, std::move(values));
  return FacilityInstance(n, std::move(a), std::move(b), std::move(grid));
}

FacilityInstance FacilityInstance::step_grid(std::size_t n, Rational a, Rational b,
                                             const Rational& step) {
  if (!(Rational(0) < step)) throw Error("grid step must be positive");
  std::vector<Rational> values;
  Rational value = a;
  while (value < b) {
    values.push_back(value);
    value += step;
  }
  if (!(value == b)) throw Error("grid step " + step.str() + " does not divide the interval");
  values.push_back(b);
  return uniform(n, std::move(a), std::move(b), std::move(values));
}

Rational median_location(const TypeProfile& profile) {
  if (profile.empty()) throw Error("median of an empty profile");
  TypeProfile sorted = profile;
  std::sort(sorted.begin(), sorted.end());
  return sorted[(sorted.size() + 1) / 2 - 1];
}

Rational social_cost(const Rational& x, const TypeProfile& profile) {
  Rational total;
  for (const Rational& position : profile) total += abs(position - x);
  return total;
}

std::pair<Rational, Rational> optimal_social_cost(const TypeProfile& profile) {
  Rational location = median_location(profile);
  Rational cost = social_cost(location, profile);
  return {std::move(location), std::move(cost)};
}

namespace {

Solution median_choice(const TypeProfile& declared) {
  return FacilityPoint{median_location(declared)};
}

}  // namespace

DirectMechanism median_zero_payment(const FacilityInstance& instance) {
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = identity_order(instance.n);
  mechanism.social_choice = median_choice;
  mechanism.payment_rule = [](std::size_t, const TypeProfile&, const std::vector<Rational>&) {
    return Rational(0);
  };
  return mechanism;
}

DirectMechanism first_price_median(const FacilityInstance& instance) {
  return first_price(ProblemKind::Facility, instance.n, median_choice);
}

DirectMechanism interval_mechanism(const FacilityInstance& instance) {
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = identity_order(instance.n);
  mechanism.social_choice = median_choice;
  const Rational width = instance.b - instance.a;
  mechanism.payment_rule = [width](std::size_t agent, const TypeProfile& declared,
                                   const std::vector<Rational>&) {
    return abs(declared[agent] - median_location(declared)) - width;
  };
  return mechanism;
}

PrefixBounds prefix_bounds(const std::vector<Rational>& sorted_history,
                           const FacilityInstance& instance) {
  if (!std::is_sorted(sorted_history.begin(), sorted_history.end())) {
    throw Error("prefix_bounds needs a sorted history");
  }
  const long k = static_cast<long>(sorted_history.size());
  const long n = static_cast<long>(instance.n);
  if (k >= n) throw Error("history of length " + std::to_string(k) + " with only " +
                          std::to_string(n) + " agents");

  // s is 1-indexed here; out-of-range ranks fall back to the interval ends.
  const auto s = [&](long index) -> const Rational& { return sorted_history[index - 1]; };
  const long half = (n + 1) / 2;

  PrefixBounds bounds;
  bounds.ell = half + k - n + 1;
  bounds.r = half - 1;
  bounds.zero_payment =
      bounds.ell > 1 && bounds.r < k && s(bounds.ell - 1) == s(bounds.r + 1);
  bounds.left = (bounds.ell >= 1 && bounds.ell <= k) ? s(bounds.ell) : instance.a;
  bounds.right = (bounds.r >= 1 && bounds.r <= k) ? s(bounds.r) : instance.b;

  const Rational midpoint = (instance.a + instance.b) / Rational(2);
  if (bounds.left == bounds.right) {
    bounds.lo = bounds.left;
    bounds.hi = bounds.right;
  } else {
    bounds.lo = (bounds.right > bounds.left && bounds.left > midpoint)
                    ? Rational(2) * bounds.left - instance.b
                    : instance.a;
    bounds.hi = (bounds.left < bounds.right && bounds.right < midpoint)
                    ? Rational(2) * bounds.right - instance.a
                    : instance.b;
  }
  bounds.cap = max(bounds.right - bounds.lo, bounds.hi - bounds.left);
  return bounds;
}

namespace {

Rational optimized_interval_payment(const FacilityInstance& instance, const Rational& declared,
                                    const Rational& location,
                                    std::vector<Rational> history) {
  std::sort(history.begin(), history.end());
  const PrefixBounds bounds = prefix_bounds(history, instance);
  if (bounds.zero_payment) return Rational(0);
  Rational payment = abs(declared - location) - bounds.cap;
  if (declared < bounds.lo) {
    payment -= bounds.lo - declared;
  } else if (declared > bounds.hi) {
    payment -= declared - bounds.hi;
  }
  return payment;
}

}  // namespace

DirectMechanism optimized_interval(const FacilityInstance& instance,
                                   std::vector<std::size_t> query_order) {
  if (query_order.size() != instance.n) {
    throw Error("optimized interval mechanism must query every agent");
  }
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = std::move(query_order);
  mechanism.social_choice = median_choice;
  mechanism.payment_rule = [instance](std::size_t agent, const TypeProfile& declared,
                                      const std::vector<Rational>& history) {
    return optimized_interval_payment(instance, declared[agent], median_location(declared),
                                      history);
  };
  return mechanism;
}

std::vector<PaymentTrace> optimized_interval_trace(const FacilityInstance& instance,
                                                   const std::vector<std::size_t>& query_order,
                                                   const TypeProfile& declared) {
  if (declared.size() != instance.n) throw Error("profile arity does not match the instance");
  const DirectMechanism mechanism = optimized_interval(instance, query_order);
  const Outcome outcome = evaluate(mechanism, declared);

  std::vector<PaymentTrace> traces(instance.n);
  for (std::size_t position = 0; position < query_order.size(); ++position) {
    const std::size_t agent = query_order[position];
    PaymentTrace& trace = traces[agent];
    trace.agent = agent;
    trace.position = position;
    for (std::size_t before = 0; before < position; ++before) {
      trace.sorted_history.push_back(declared[query_order[before]]);
    }
    std::sort(trace.sorted_history.begin(), trace.sorted_history.end());
    trace.bounds = prefix_bounds(trace.sorted_history, instance);
    trace.left_above_right = trace.bounds.right < trace.bounds.left;
    trace.payment = outcome.payments[agent];
  }
  return traces;
}

DirectMechanism dictatorship(const FacilityInstance& instance, std::size_t dictator) {
  if (dictator >= instance.n) throw Error("dictator index out of range");
  DirectMechanism mechanism;
  mechanism.problem = ProblemKind::Facility;
  mechanism.query_order = {dictator};
  mechanism.social_choice = [dictator](const TypeProfile& declared) -> Solution {
    return FacilityPoint{declared[dictator]};
  };
  mechanism.payment_rule = [](std::size_t, const TypeProfile&, const std::vector<Rational>&) {
    return Rational(0);
  };
  return mechanism;
}

ApproxReport approximation_ratio(const DirectMechanism& mechanism,
                                 const FacilityInstance& instance) {
  const std::vector<TypeProfile> profiles = instance.grid.all_profiles();

  struct ChunkReport {
    bool has_unbounded = false;
    std::size_t unbounded_rank = 0;
    bool has_ratio = false;
    Rational ratio;
    std::size_t ratio_rank = 0;
  };

  const auto scan = [&](std::size_t begin, std::size_t end, ChunkReport& chunk) {
    for (std::size_t rank = begin; rank < end; ++rank) {
      const TypeProfile& profile = profiles[rank];
      const Outcome outcome = evaluate(mechanism, profile);
      const Rational cost =
          social_cost(std::get<FacilityPoint>(outcome.solution).x, profile);
      const Rational optimum = optimal_social_cost(profile).second;
      if (optimum == Rational(0)) {
        if (!(cost == Rational(0)) && !chunk.has_unbounded) {
          chunk.has_unbounded = true;
          chunk.unbounded_rank = rank;
        }
        continue;
      }
      const Rational ratio = cost / optimum;
      if (!chunk.has_ratio || chunk.ratio < ratio) {
        chunk.has_ratio = true;
        chunk.ratio = ratio;
        chunk.ratio_rank = rank;
      }
    }
  };

  const std::size_t worker_count = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), profiles.size()));
  std::vector<ChunkReport> chunks(worker_count);
  if (worker_count > 1) {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    const std::size_t step = (profiles.size() + worker_count - 1) / worker_count;
    for (std::size_t w = 0; w < worker_count; ++w) {
      const std::size_t begin = w * step;
      const std::size_t end = std::min(profiles.size(), begin + step);
      workers.emplace_back([&, begin, end, w] { scan(begin, end, chunks[w]); });
    }
    for (auto& worker : workers) worker.join();
  } else {
    scan(0, profiles.size(), chunks[0]);
  }

  ChunkReport merged;
  for (const ChunkReport& chunk : chunks) {
    if (chunk.has_unbounded &&
        (!merged.has_unbounded || chunk.unbounded_rank < merged.unbounded_rank)) {
      merged.has_unbounded = true;
      merged.unbounded_rank = chunk.unbounded_rank;
    }
    if (chunk.has_ratio && (!merged.has_ratio || merged.ratio < chunk.ratio)) {
      merged.has_ratio = true;
      merged.ratio = chunk.ratio;
      merged.ratio_rank = chunk.ratio_rank;
    }
  }

  ApproxReport report;
  if (merged.has_unbounded) {
    report.unbounded = true;
    report.witness = profiles[merged.unbounded_rank];
    return report;
  }
  if (!merged.has_ratio) {
    // Every profile is exactly optimal with optimum zero.
    report.ratio = Rational(1);
    report.witness = profiles.front();
    return report;
  }
  report.ratio = merged.ratio;
  report.witness = profiles[merged.ratio_rank];
  return report;
}

std::pair<Rational, Rational> admissible_interval(const Rational& x, const Rational& alpha,
                                                  const Rational& k, std::size_t n) {
  if (n < 3) throw Error("admissible_interval needs n >= 3");
  if (!(Rational(0) < alpha)) throw Error("admissible_interval needs alpha > 0");
  if (k < Rational(1)) throw Error("admissible_interval needs k >= 1");
  const Rational n_r(static_cast<long>(n));
  const Rational n_minus_2(static_cast<long>(n - 2));
  Rational lo = x - alpha * (Rational(1) + (k - Rational(1)) / n_r);
  Rational hi = x - alpha * (Rational(1) - (k - Rational(1)) / n_minus_2);
  return {std::move(lo), std::move(hi)};
}

std::pair<TypeProfile, TypeProfile> lower_bound_profiles(const Rational& c, const Rational& delta,
                                                         const Rational& b_hi, std::size_t n,
                                                         std::size_t i) {
  if (i >= n) throw Error("agent index out of range");
  if (b_hi < c + delta) throw Error("lower_bound_profiles needs c + delta <= b_hi");
  TypeProfile x(n, c);
  x[i] = c + delta;
  TypeProfile y(n, b_hi);
  y[i] = c;
  return {std::move(x), std::move(y)};
}

Rational lower_bound_max_step(const Rational& eps, std::size_t n, const Rational& a,
                              const Rational& b) {
  if (n < 3) throw Error("lower_bound_max_step needs n >= 3");
  if (!(Rational(0) < eps)) throw Error("lower_bound_max_step needs eps > 0");
  if (!(a < b)) throw Error("lower_bound_max_step needs a < b");
  return eps / Rational(static_cast<long>(n - 2)) * (b - a) / Rational(2);
}

TypeProfile frugality_profile(std::size_t n, const Rational& a, const Rational& b,
                              const Rational& delta) {
  if (n == 0) throw Error("frugality_profile needs at least one agent");
  if (!(Rational(0) < delta) || !(delta < b - a)) {
    throw Error("frugality_profile needs 0 < delta < b - a");
  }
  TypeProfile profile(n, a);
  const std::size_t high = (n + 1) / 2;
  for (std::size_t i = 0; i < high; ++i) profile[i] = b - delta;
  return profile;
}

}  // namespace osp::facility
