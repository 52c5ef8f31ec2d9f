#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "osp/json_io.hpp"

namespace {

using osp::io::json;

constexpr const char* kToolName = "ospbench";
constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitHolds = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;

constexpr std::uint64_t kDefaultBudget = 10'000'000;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw osp::Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw osp::Error("cannot parse '" + path + "': " + e.what());
  }
}

// Everything a scenario file may specify. Command-line flags override these
// field by field after the file is read.
struct Settings {
  std::string problem;
  json instance;   // problem-specific descriptor, may embed mechanism/query_order
  json mechanism;  // name string or { "name": ..., ... }
  std::string cost_model = "monitoring";
  std::string property = "osp";
  std::optional<std::vector<std::size_t>> query_order;
  std::optional<std::uint64_t> budget;
  json profile;  // run only: array, or "v1,v2,..." string
  std::string output;

  // demo parameters, as rational strings
  std::string demo;
  std::optional<std::size_t> n;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> delta;
  std::optional<std::string> k;
};

std::string rational_text(const json& value) {
  return osp::io::rational_from_json(value).str();
}

void apply_scenario(Settings& settings, const json& scenario, const std::string& command) {
  if (!scenario.is_object()) throw osp::Error("scenario must be a JSON object");
  for (const auto& [key, value] : scenario.items()) {
    if (key == "command") {
      if (value.get<std::string>() != command) {
        throw osp::Error("scenario is for command '" + value.get<std::string>() +
                         "', invoked as '" + command + "'");
      }
    } else if (key == "problem") {
      settings.problem = value.get<std::string>();
    } else if (key == "instance") {
      settings.instance = value;
    } else if (key == "mechanism") {
      settings.mechanism = value;
    } else if (key == "cost_model") {
      settings.cost_model = value.get<std::string>();
    } else if (key == "property") {
      settings.property = value.get<std::string>();
    } else if (key == "query_order") {
      std::vector<std::size_t> order;
      for (const json& item : value) order.push_back(item.get<std::size_t>());
      settings.query_order = std::move(order);
    } else if (key == "budget") {
      settings.budget = value.get<std::uint64_t>();
    } else if (key == "profile") {
      settings.profile = value;
    } else if (key == "output") {
      settings.output = value.get<std::string>();
    } else if (key == "demo") {
      settings.demo = value.get<std::string>();
    } else if (key == "n") {
      settings.n = value.get<std::size_t>();
    } else if (key == "a") {
      settings.a = rational_text(value);
    } else if (key == "b") {
      settings.b = rational_text(value);
    } else if (key == "delta") {
      settings.delta = rational_text(value);
    } else if (key == "k") {
      settings.k = rational_text(value);
    } else {
      throw osp::Error("unknown scenario field '" + key + "'");
    }
  }
}

osp::CostModel cost_model_from(const std::string& name) {
  if (name == "monitoring") return osp::CostModel::Monitoring;
  if (name == "quasilinear") return osp::CostModel::Quasilinear;
  throw osp::Error("unknown cost model '" + name + "' (monitoring|quasilinear)");
}

osp::Property property_from(const std::string& name) {
  if (name == "osp") return osp::Property::Osp;
  if (name == "sp") return osp::Property::Sp;
  if (name == "vp") return osp::Property::Vp;
  throw osp::Error("unknown property '" + name + "' (osp|sp|vp)");
}

osp::TypeProfile profile_from_settings(const json& value) {
  if (value.is_null()) throw osp::Error("no profile given; pass --profile or a scenario field");
  if (value.is_array()) return osp::io::profile_from_json(value);
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    if (!text.empty() && text.front() == '[') {
      return osp::io::profile_from_json(json::parse(text));
    }
    osp::TypeProfile out;
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      const std::size_t end = comma == std::string::npos ? text.size() : comma;
      out.push_back(osp::Rational::parse(text.substr(start, end - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }
  throw osp::Error("profile must be an array of rationals or a comma-separated string");
}

json query_order_json(const std::vector<std::size_t>& order) {
  json out = json::array();
  for (std::size_t agent : order) out.push_back(agent);
  return out;
}

// Estimated cost evaluations of a command, checked against the budget before
// any enumeration starts. The OSP estimate is conservative: the diverging
// pair count over a compiled tree is below twice the squared profile count.
void guard_budget(std::uint64_t estimate, std::uint64_t budget, const std::string& what) {
  if (estimate > budget) {
    throw osp::BudgetExceededError(what + " needs about " + std::to_string(estimate) +
                                   " cost evaluations; the budget is " + std::to_string(budget) +
                                   " (raise --budget to allow it)");
  }
}

std::uint64_t estimate(const osp::Domain& domain, osp::Property property) {
  const unsigned __int128 profiles = domain.profile_count();
  unsigned __int128 cost = 0;
  switch (property) {
    case osp::Property::Osp:
      cost = 2 * profiles * profiles;
      break;
    case osp::Property::Sp: {
      unsigned __int128 deviations = 0;
      for (std::size_t i = 0; i < domain.agents(); ++i) deviations += domain.of(i).size();
      cost = profiles * deviations;
      break;
    }
    case osp::Property::Vp:
      cost = profiles;
      break;
  }
  constexpr std::uint64_t kMax = ~std::uint64_t{0};
  return cost > kMax ? kMax : static_cast<std::uint64_t>(cost);
}

// A facility scenario resolved to concrete objects plus their canonical echo.
struct FacilityRun {
  osp::facility::FacilityInstance instance;
  osp::DirectMechanism mechanism;
  std::vector<std::size_t> query_order;
  json mechanism_json;
};

struct SchedulingRun {
  osp::sched::SchedulingInstance instance;
  osp::DirectMechanism mechanism;
  json mechanism_json;
};

std::string resolve_problem(const Settings& settings) {
  if (!settings.problem.empty()) {
    if (settings.problem != "facility" && settings.problem != "scheduling") {
      throw osp::Error("unknown problem '" + settings.problem + "' (facility|scheduling)");
    }
    return settings.problem;
  }
  if (!settings.instance.is_object()) throw osp::Error("scenario needs an 'instance' object");
  if (settings.instance.contains("jobs")) return "scheduling";
  if (settings.instance.contains("grid") || settings.instance.contains("step")) return "facility";
  throw osp::Error("cannot tell the problem from the instance; set 'problem'");
}

json resolve_mechanism_field(const Settings& settings) {
  if (!settings.mechanism.is_null()) return settings.mechanism;
  if (settings.instance.is_object() && settings.instance.contains("mechanism")) {
    return settings.instance["mechanism"];
  }
  throw osp::Error("no mechanism named; set 'mechanism' in the scenario or instance");
}

std::string mechanism_name(const json& mechanism) {
  if (mechanism.is_string()) return mechanism.get<std::string>();
  if (mechanism.is_object() && mechanism.contains("name")) {
    return mechanism["name"].get<std::string>();
  }
  throw osp::Error("mechanism must be a name or an object with a 'name'");
}

std::vector<std::size_t> resolve_query_order(const Settings& settings, std::size_t n) {
  if (settings.query_order) return *settings.query_order;
  if (settings.instance.is_object() && settings.instance.contains("query_order")) {
    std::vector<std::size_t> order;
    for (const json& item : settings.instance["query_order"]) {
      order.push_back(item.get<std::size_t>());
    }
    return order;
  }
  return osp::identity_order(n);
}

FacilityRun build_facility(const Settings& settings) {
  namespace fac = osp::facility;
  if (!settings.instance.is_object()) throw osp::Error("scenario needs an 'instance' object");
  fac::FacilityInstance instance = osp::io::facility_instance_from_json(settings.instance);
  const json mechanism_field = resolve_mechanism_field(settings);
  const std::string name = mechanism_name(mechanism_field);
  std::vector<std::size_t> order = resolve_query_order(settings, instance.n);

  osp::DirectMechanism mechanism;
  json echo;
  if (name == "zero-payment-median" || name == "median-zero-payment") {
    mechanism = fac::median_zero_payment(instance);
    echo["name"] = "zero-payment-median";
  } else if (name == "first-price-median") {
    mechanism = fac::first_price_median(instance);
    echo["name"] = "first-price-median";
  } else if (name == "interval") {
    mechanism = fac::interval_mechanism(instance);
    echo["name"] = "interval";
  } else if (name == "optimized-interval" || name == "oim") {
    mechanism = fac::optimized_interval(instance, order);
    echo["name"] = "optimized-interval";
  } else if (name == "dictatorship") {
    std::size_t dictator = 0;
    if (mechanism_field.is_object() && mechanism_field.contains("dictator")) {
      dictator = mechanism_field["dictator"].get<std::size_t>();
    }
    mechanism = fac::dictatorship(instance, dictator);
    echo["name"] = "dictatorship";
    echo["dictator"] = dictator;
  } else {
    throw osp::Error("unknown facility mechanism '" + name + "'");
  }
  // The anonymous rules accept any injective order; the dictatorship keeps
  // its own single-agent order unless one was named explicitly.
  if (name != "optimized-interval" && name != "oim") {
    if (name != "dictatorship" || settings.query_order ||
        (settings.instance.is_object() && settings.instance.contains("query_order"))) {
      mechanism.query_order = order;
    }
  }
  std::vector<std::size_t> resolved = mechanism.query_order;
  return FacilityRun{std::move(instance), std::move(mechanism), std::move(resolved),
                     std::move(echo)};
}

SchedulingRun build_scheduling(const Settings& settings) {
  if (!settings.instance.is_object()) throw osp::Error("scenario needs an 'instance' object");
  osp::sched::SchedulingInstance instance =
      osp::io::scheduling_instance_from_json(settings.instance);
  if (settings.budget) {
    instance = osp::sched::SchedulingInstance(instance.n, instance.jobs, instance.domain,
                                              *settings.budget);
  }
  const std::string name = mechanism_name(resolve_mechanism_field(settings));
  if (name != "first-price-optimal" && name != "first-price") {
    throw osp::Error("unknown scheduling mechanism '" + name + "'");
  }
  osp::DirectMechanism mechanism = osp::sched::first_price_scheduler(instance);
  if (settings.query_order) mechanism.query_order = *settings.query_order;
  json echo;
  echo["name"] = "first-price-optimal";
  return SchedulingRun{std::move(instance), std::move(mechanism), std::move(echo)};
}

json report_shell(const std::string& command) {
  json out;
  out["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  out["command"] = command;
  return out;
}

int emit(const json& report, const std::string& output, int exit_code) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw osp::Error("cannot write '" + output + "'");
    out << text;
  }
  return exit_code;
}

int cmd_validate(const std::string& tree_path, const std::string& output) {
  const osp::ExtensiveTree tree = osp::io::tree_from_json(load_json_file(tree_path));
  const osp::ValidationReport report = osp::validate_tree(tree);
  json out = report_shell("validate");
  out["parameters"] = {{"input", tree_path}};
  out["result"] = osp::io::to_json(report);
  return emit(out, output, report.ok() ? kExitHolds : kExitViolation);
}

int cmd_verify(const Settings& settings) {
  const std::string problem = resolve_problem(settings);
  const osp::Property property = property_from(settings.property);
  const osp::CostModel model = cost_model_from(settings.cost_model);
  const std::uint64_t budget = settings.budget.value_or(kDefaultBudget);

  json parameters;
  parameters["problem"] = problem;
  osp::Verdict verdict;
  if (problem == "facility") {
    FacilityRun run = build_facility(settings);
    guard_budget(estimate(run.instance.grid, property), budget, "verification");
    switch (property) {
      case osp::Property::Osp:
        verdict = check_osp(compile_direct(run.mechanism, run.instance.grid), model);
        break;
      case osp::Property::Sp:
        verdict = check_strategyproof(run.mechanism, run.instance.grid, model);
        break;
      case osp::Property::Vp:
        verdict = check_voluntary_participation(run.mechanism, run.instance.grid, model);
        break;
    }
    parameters["mechanism"] = run.mechanism_json;
    parameters["cost_model"] = settings.cost_model;
    parameters["property"] = osp::to_string(property);
    parameters["query_order"] = query_order_json(run.mechanism.query_order);
    parameters["budget"] = budget;
    parameters["instance"] = osp::io::to_json(run.instance);
  } else {
    SchedulingRun run = build_scheduling(settings);
    guard_budget(estimate(run.instance.domain, property), budget, "verification");
    switch (property) {
      case osp::Property::Osp:
        verdict = check_osp(compile_direct(run.mechanism, run.instance.domain), model);
        break;
      case osp::Property::Sp:
        verdict = check_strategyproof(run.mechanism, run.instance.domain, model);
        break;
      case osp::Property::Vp:
        verdict = check_voluntary_participation(run.mechanism, run.instance.domain, model);
        break;
    }
    parameters["mechanism"] = run.mechanism_json;
    parameters["cost_model"] = settings.cost_model;
    parameters["property"] = osp::to_string(property);
    parameters["query_order"] = query_order_json(run.mechanism.query_order);
    parameters["budget"] = budget;
    parameters["instance"] = osp::io::to_json(run.instance);
  }

  json out = report_shell("verify");
  out["parameters"] = std::move(parameters);
  out["result"] = osp::io::to_json(verdict);
  return emit(out, settings.output, verdict.holds() ? kExitHolds : kExitViolation);
}

int cmd_run(const Settings& settings) {
  const std::string problem = resolve_problem(settings);
  const osp::CostModel model = cost_model_from(settings.cost_model);
  const osp::TypeProfile profile = profile_from_settings(settings.profile);

  json parameters;
  parameters["problem"] = problem;
  osp::Outcome outcome;
  osp::ProblemKind kind = osp::ProblemKind::Facility;
  if (problem == "facility") {
    FacilityRun run = build_facility(settings);
    if (profile.size() != run.instance.n) {
      throw osp::Error("profile has " + std::to_string(profile.size()) + " entries, instance has " +
                       std::to_string(run.instance.n) + " agents");
    }
    outcome = evaluate(run.mechanism, profile);
    parameters["mechanism"] = run.mechanism_json;
    parameters["cost_model"] = settings.cost_model;
    parameters["query_order"] = query_order_json(run.mechanism.query_order);
    parameters["instance"] = osp::io::to_json(run.instance);
  } else {
    kind = osp::ProblemKind::Scheduling;
    SchedulingRun run = build_scheduling(settings);
    if (profile.size() != run.instance.n) {
      throw osp::Error("profile has " + std::to_string(profile.size()) + " entries, instance has " +
                       std::to_string(run.instance.n) + " machines");
    }
    outcome = evaluate(run.mechanism, profile);
    parameters["mechanism"] = run.mechanism_json;
    parameters["cost_model"] = settings.cost_model;
    parameters["query_order"] = query_order_json(run.mechanism.query_order);
    parameters["instance"] = osp::io::to_json(run.instance);
  }
  parameters["profile"] = osp::io::to_json(profile);

  json result;
  result["outcome"] = osp::io::to_json(outcome);
  json truthful = json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    truthful.push_back(osp::io::to_json(osp::agent_cost(
        model, kind, i, profile[i], profile[i], outcome.solution, outcome.payments[i])));
  }
  result["truthful_costs"] = std::move(truthful);

  json out = report_shell("run");
  out["parameters"] = std::move(parameters);
  out["result"] = std::move(result);
  return emit(out, settings.output, kExitHolds);
}

int cmd_approx(const Settings& settings) {
  if (resolve_problem(settings) != "facility") {
    throw osp::Error("approx is defined for facility scenarios");
  }
  const std::uint64_t budget = settings.budget.value_or(kDefaultBudget);
  FacilityRun run = build_facility(settings);
  guard_budget(estimate(run.instance.grid, osp::Property::Vp) * 2, budget, "approximation");
  const osp::facility::ApproxReport report =
      osp::facility::approximation_ratio(run.mechanism, run.instance);

  json out = report_shell("approx");
  json parameters;
  parameters["problem"] = "facility";
  parameters["mechanism"] = run.mechanism_json;
  parameters["query_order"] = query_order_json(run.mechanism.query_order);
  parameters["budget"] = budget;
  parameters["instance"] = osp::io::to_json(run.instance);
  out["parameters"] = std::move(parameters);
  out["result"] = osp::io::to_json(report);
  return emit(out, settings.output, kExitHolds);
}

int demo_scheduling_lb(const Settings& settings) {
  const osp::Rational a = osp::Rational::parse(settings.a.value_or("1"));
  const osp::Rational b = osp::Rational::parse(settings.b.value_or("3"));
  const osp::Rational k = osp::Rational::parse(settings.k.value_or("3/2"));
  const osp::sched::LowerBoundReport report = osp::sched::scheduling_lower_bound(a, b, k);

  json out = report_shell("demo");
  out["parameters"] = {{"demo", "scheduling-lb"},
                       {"a", a.str()},
                       {"b", b.str()},
                       {"k", k.str()}};
  json result;
  result["report"] = osp::io::to_json(report);
  const bool consistent = osp::Rational(0) < report.margin;
  result["consistent"] = consistent;
  out["result"] = std::move(result);
  return emit(out, settings.output, consistent ? kExitHolds : kExitViolation);
}

int demo_frugality(const Settings& settings) {
  namespace fac = osp::facility;
  const std::size_t n = settings.n.value_or(3);
  const osp::Rational a = osp::Rational::parse(settings.a.value_or("0"));
  const osp::Rational b = osp::Rational::parse(settings.b.value_or("10"));
  const osp::Rational delta = osp::Rational::parse(settings.delta.value_or("1"));
  if (n % 2 == 0) throw osp::Error("the frugality demo needs an odd agent count");

  const osp::TypeProfile profile = fac::frugality_profile(n, a, b, delta);
  const fac::FacilityInstance instance = fac::FacilityInstance::uniform(n, a, b, {a, b - delta});
  const std::vector<std::size_t> order = osp::identity_order(n);
  const std::vector<fac::PaymentTrace> traces =
      fac::optimized_interval_trace(instance, order, profile);

  const osp::Rational width = b - a;
  json charges = json::array();
  std::size_t paying_full = 0;
  for (const fac::PaymentTrace& trace : traces) {
    const osp::Rational charge = -trace.payment;
    if (charge == width) ++paying_full;
    charges.push_back(osp::io::to_json(charge));
  }
  const std::size_t expected = (n + 1) / 2 - 1;
  const bool consistent = paying_full == expected;

  json out = report_shell("demo");
  out["parameters"] = {{"demo", "frugality"},
                       {"n", n},
                       {"a", a.str()},
                       {"b", b.str()},
                       {"delta", delta.str()}};
  json result;
  result["instance"] = osp::io::to_json(instance);
  result["query_order"] = query_order_json(order);
  result["profile"] = osp::io::to_json(profile);
  json trace_list = json::array();
  for (const fac::PaymentTrace& trace : traces) trace_list.push_back(osp::io::to_json(trace));
  result["traces"] = std::move(trace_list);
  result["charges"] = std::move(charges);
  result["full_charge"] = width.str();
  result["paying_full"] = paying_full;
  result["expected_paying_full"] = expected;
  result["consistent"] = consistent;
  out["result"] = std::move(result);
  return emit(out, settings.output, consistent ? kExitHolds : kExitViolation);
}

int demo_facility_lb(const Settings& settings) {
  namespace fac = osp::facility;
  const std::size_t n = settings.n.value_or(3);
  const osp::Rational a = osp::Rational::parse(settings.a.value_or("0"));
  const osp::Rational b = osp::Rational::parse(settings.b.value_or("2"));
  const osp::Rational delta = osp::Rational::parse(settings.delta.value_or("1"));
  const std::uint64_t budget = settings.budget.value_or(kDefaultBudget);
  if (n < 3) throw osp::Error("the facility lower-bound demo needs n >= 3");

  const fac::FacilityInstance instance = fac::FacilityInstance::step_grid(n, a, b, delta);
  guard_budget(estimate(instance.grid, osp::Property::Osp), budget, "the lower-bound demo");
  const osp::DirectMechanism mechanism = fac::median_zero_payment(instance);
  const osp::Verdict verdict =
      check_osp(compile_direct(mechanism, instance.grid), osp::CostModel::Quasilinear);
  const bool consistent = !verdict.holds();

  const osp::Rational max_step = fac::lower_bound_max_step(osp::Rational(1), n, a, b);
  const auto [push, pull] = fac::lower_bound_profiles(a, delta, b, n, 0);

  json out = report_shell("demo");
  out["parameters"] = {{"demo", "facility-lb"},
                       {"n", n},
                       {"a", a.str()},
                       {"b", b.str()},
                       {"delta", delta.str()},
                       {"budget", budget}};
  json result;
  result["instance"] = osp::io::to_json(instance);
  result["mechanism"] = {{"name", "zero-payment-median"}};
  result["cost_model"] = "quasilinear";
  result["max_step_for_eps_1"] = max_step.str();
  result["step_within_bound"] = delta <= max_step;
  result["argument_profiles"] =
      json::array({osp::io::to_json(push), osp::io::to_json(pull)});
  result["verdict"] = osp::io::to_json(verdict);
  result["expected"] = "violation";
  result["consistent"] = consistent;
  out["result"] = std::move(result);
  return emit(out, settings.output, consistent ? kExitHolds : kExitViolation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive verification workbench for obviously strategyproof mechanisms"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  std::string tree_path;
  std::string scenario_path;
  std::string flag_output;
  std::string flag_property;
  std::string flag_cost_model;
  std::string flag_mechanism;
  std::string flag_profile;
  std::string flag_a, flag_b, flag_delta, flag_k;
  std::size_t flag_n = 0;
  std::uint64_t flag_budget = 0;
  std::vector<std::size_t> flag_query_order;
  std::string demo_name;

  CLI::App* validate = app.add_subcommand("validate", "Check a mechanism tree file");
  validate->add_option("tree", tree_path, "Tree JSON file")->required();
  validate->add_option("--output", flag_output, "Write the report here as well");

  const auto add_common = [&](CLI::App* cmd, bool with_scenario_required) {
    auto* opt = cmd->add_option("scenario", scenario_path, "Scenario JSON file");
    if (with_scenario_required) opt->required();
    cmd->add_option("--mechanism", flag_mechanism, "Mechanism name override");
    cmd->add_option("--cost-model", flag_cost_model, "monitoring|quasilinear");
    cmd->add_option("--query-order", flag_query_order, "Agent query order")->delimiter(',');
    cmd->add_option("--budget", flag_budget, "Cost evaluation budget");
    cmd->add_option("--output", flag_output, "Write the report here as well");
  };

  CLI::App* verify = app.add_subcommand("verify", "Verify osp, sp or vp on a scenario");
  add_common(verify, true);
  verify->add_option("--property", flag_property, "osp|sp|vp");

  CLI::App* run = app.add_subcommand("run", "Evaluate the mechanism on one profile");
  add_common(run, true);
  run->add_option("--profile", flag_profile, "Declared types, comma-separated or JSON");

  CLI::App* approx = app.add_subcommand("approx", "Worst-case approximation ratio");
  add_common(approx, true);

  CLI::App* demo = app.add_subcommand("demo", "Reproduce a built-in argument");
  demo->add_option("name", demo_name, "scheduling-lb|frugality|facility-lb")->required();
  demo->add_option("scenario", scenario_path, "Scenario JSON file");
  demo->add_option("--n", flag_n, "Agent count");
  demo->add_option("--a", flag_a, "Interval left end / fast unit time");
  demo->add_option("--b", flag_b, "Interval right end / slow unit time");
  demo->add_option("--delta", flag_delta, "Grid step");
  demo->add_option("--k", flag_k, "Approximation factor");
  demo->add_option("--budget", flag_budget, "Cost evaluation budget");
  demo->add_option("--output", flag_output, "Write the report here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(tree_path, flag_output);

    Settings settings;
    CLI::App* active = app.get_subcommands().front();
    if (!scenario_path.empty()) {
      apply_scenario(settings, load_json_file(scenario_path), active->get_name());
    }
    const auto passed = [&](const char* name) {
      const CLI::Option* option = active->get_option_no_throw(name);
      return option != nullptr && option->count() > 0;
    };
    if (passed("--mechanism")) settings.mechanism = flag_mechanism;
    if (passed("--cost-model")) settings.cost_model = flag_cost_model;
    if (passed("--query-order")) settings.query_order = flag_query_order;
    if (passed("--budget")) settings.budget = flag_budget;
    if (passed("--output")) settings.output = flag_output;
    if (passed("--property")) settings.property = flag_property;
    if (passed("--profile")) settings.profile = flag_profile;
    if (demo->parsed()) {
      if (passed("--n")) settings.n = flag_n;
      if (passed("--a")) settings.a = flag_a;
      if (passed("--b")) settings.b = flag_b;
      if (passed("--delta")) settings.delta = flag_delta;
      if (passed("--k")) settings.k = flag_k;
      if (!settings.demo.empty() && settings.demo != demo_name) {
        throw osp::Error("scenario is for demo '" + settings.demo + "', invoked as '" +
                         demo_name + "'");
      }
    }

    if (verify->parsed()) return cmd_verify(settings);
    if (run->parsed()) return cmd_run(settings);
    if (approx->parsed()) return cmd_approx(settings);
    if (demo->parsed()) {
      if (demo_name == "scheduling-lb") return demo_scheduling_lb(settings);
      if (demo_name == "frugality") return demo_frugality(settings);
      if (demo_name == "facility-lb") return demo_facility_lb(settings);
      throw osp::Error("unknown demo '" + demo_name +
                       "' (scheduling-lb|frugality|facility-lb)");
    }
    throw osp::Error("no command");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
