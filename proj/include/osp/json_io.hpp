#pragma once

#include <json.hpp>

#include "osp/core.hpp"
#include "osp/facility.hpp"
#include "osp/scheduling.hpp"
#include "osp/tree.hpp"
#include "osp/verifier.hpp"

namespace osp::io {

// ordered_json keeps keys in insertion order, so serialized reports are
// byte-stable across runs.
using json = nlohmann::ordered_json;

// Rationals serialize as canonical "p/q" strings ("p" for integers) and
// parse from strings or JSON integers; floats are rejected.
json to_json(const Rational& value);
Rational rational_from_json(const json& value);

json to_json(const TypeProfile& profile);
TypeProfile profile_from_json(const json& value);

// Array of per-agent value arrays. A flat array of rationals is accepted on
// input as a uniform domain when `agents` is given.
json to_json(const Domain& domain);
Domain domain_from_json(const json& value, std::size_t agents = 0);

json to_json(const Solution& solution);
Solution solution_from_json(const json& value);

json to_json(const Outcome& outcome);
Outcome outcome_from_json(const json& value);

json to_json(const ExtensiveTree& tree);
ExtensiveTree tree_from_json(const json& value);

json to_json(const ValidationReport& report);
json to_json(const Verdict& verdict);

json to_json(const facility::PrefixBounds& bounds);
json to_json(const facility::PaymentTrace& trace);
json to_json(const facility::ApproxReport& report);
json to_json(const facility::FacilityInstance& instance);
facility::FacilityInstance facility_instance_from_json(const json& value);

json to_json(const sched::LowerBoundReport& report);
json to_json(const sched::SchedulingInstance& instance);
sched::SchedulingInstance scheduling_instance_from_json(const json& value);

}  // namespace osp::io
