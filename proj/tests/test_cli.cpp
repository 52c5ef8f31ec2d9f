#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks against the installed binary. The harness passes its
// location and the scenario directory through the environment.

namespace {

using json = nlohmann::ordered_json;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

std::string required_env(const char* name) {
  const char* value = std::getenv(name);
  REQUIRE_MESSAGE(value != nullptr, name << " must point at the tool under test");
  return value;
}

CliResult run_cli(const std::string& args) {
  const std::string command = required_env("OSP_CLI_BIN") + (" " + args) + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  const int status = pclose(pipe);
  CliResult result;
  result.output = std::move(output);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string scenario(const std::string& name) {
  return required_env("OSP_SCENARIO_DIR") + ("/" + name);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("verify exit codes follow the verdict") {
  CHECK(run_cli("verify " + scenario("first-price-median.json")).exit_code == 0);
  CHECK(run_cli("verify " + scenario("zero-payment-median.json")).exit_code == 1);
  CHECK(run_cli("verify " + scenario("optimized-interval.json")).exit_code == 0);
  CHECK(run_cli("verify " + scenario("interval-participation.json")).exit_code == 1);
  CHECK(run_cli("verify " + scenario("scheduling-first-price.json")).exit_code == 0);
}

TEST_CASE("reports are byte stable and mirrored to the output file") {
  const std::string args = "verify " + scenario("first-price-median.json");
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  CHECK(!first.output.empty());

  const std::string copy = "cli_report_copy.json";
  const CliResult with_file = run_cli(args + " --output " + copy);
  CHECK(with_file.exit_code == 0);
  CHECK(read_file(copy) == with_file.output);
  std::remove(copy.c_str());
}

TEST_CASE("verify reports embed the resolved parameters") {
  const json report = json::parse(run_cli("verify " + scenario("zero-payment-median.json")).output);
  CHECK(report["tool"]["name"] == "ospbench");
  CHECK(report["command"] == "verify");
  CHECK(report["parameters"]["mechanism"]["name"] == "zero-payment-median");
  CHECK(report["parameters"]["cost_model"] == "quasilinear");
  CHECK(report["parameters"]["budget"] == 10000000);
  CHECK(report["parameters"]["instance"]["grid"].size() == 3);
  CHECK(report["result"]["holds"] == false);
  CHECK(!report["result"]["counterexamples"].empty());
}

TEST_CASE("validate accepts the sample tree and flags broken ones") {
  CHECK(run_cli("validate " + scenario("tree-pair-query.json")).exit_code == 0);

  // Dropping (0,1) from the wide edge leaves that profile with no match.
  json gappy = json::parse(read_file(scenario("tree-pair-query.json")));
  gappy["edges"][0]["label"] = json::array({json::array({"0", "0"}), json::array({"1", "0"})});
  write_file("cli_gap_tree.json", gappy.dump());
  const CliResult gap = run_cli("validate cli_gap_tree.json");
  CHECK(gap.exit_code == 1);
  const json gap_report = json::parse(gap.output);
  CHECK(gap_report["result"]["ok"] == false);
  CHECK(gap_report["result"]["violations"][0]["kind"] == "gap");
  std::remove("cli_gap_tree.json");

  // A duplicated node id is rejected before validation even starts.
  json duplicated = json::parse(read_file(scenario("tree-pair-query.json")));
  duplicated["nodes"][1]["id"] = 0;
  write_file("cli_dup_tree.json", duplicated.dump());
  CHECK(run_cli("validate cli_dup_tree.json").exit_code == 2);
  std::remove("cli_dup_tree.json");
}

TEST_CASE("run evaluates the scenario profile") {
  const CliResult result = run_cli("run " + scenario("run-first-price-median.json"));
  CHECK(result.exit_code == 0);
  const json report = json::parse(result.output);
  CHECK(report["result"]["outcome"]["solution"]["x"] == "5");
  CHECK(report["result"]["outcome"]["payments"] == json::array({"5", "0", "5"}));
  CHECK(report["result"]["truthful_costs"] == json::array({"0", "0", "0"}));

  const CliResult overridden =
      run_cli("run " + scenario("run-first-price-median.json") + " --profile 10,10,10");
  CHECK(json::parse(overridden.output)["result"]["outcome"]["solution"]["x"] == "10");
}

TEST_CASE("approx reports the dictatorship ratio") {
  const CliResult result = run_cli("approx " + scenario("dictatorship-approx.json"));
  CHECK(result.exit_code == 0);
  const json report = json::parse(result.output);
  CHECK(report["result"]["unbounded"] == false);
  CHECK(report["result"]["ratio"] == "2");
  CHECK(report["result"]["witness"] == json::array({"0", "1", "1"}));
}

TEST_CASE("demos exit by their expected outcome") {
  const CliResult frugality = run_cli("demo frugality");
  CHECK(frugality.exit_code == 0);
  const json frugality_report = json::parse(frugality.output);
  CHECK(frugality_report["result"]["charges"] == json::array({"10", "0", "0"}));
  CHECK(frugality_report["result"]["paying_full"] == 1);

  CHECK(run_cli("demo scheduling-lb").exit_code == 0);
  CHECK(run_cli("demo facility-lb").exit_code == 0);

  const json lb = json::parse(run_cli("demo facility-lb").output);
  CHECK(lb["result"]["verdict"]["holds"] == false);
  CHECK(lb["result"]["consistent"] == true);
  CHECK(lb["result"]["step_within_bound"] == true);
}

TEST_CASE("input problems exit with code two") {
  CHECK(run_cli("verify does_not_exist.json").exit_code == 2);
  CHECK(run_cli("verify " + scenario("first-price-median.json") + " --mechanism nope")
            .exit_code == 2);
  CHECK(run_cli("verify " + scenario("first-price-median.json") + " --budget 10").exit_code ==
        2);
  CHECK(run_cli("demo scheduling-lb --b 9/4").exit_code == 2);
  CHECK(run_cli("demo frugality --n 4").exit_code == 2);
  CHECK(run_cli("verify " + scenario("first-price-median.json") + " --property maybe")
            .exit_code == 2);
}

TEST_CASE("flag overrides replace scenario fields") {
  const CliResult result =
      run_cli("verify " + scenario("zero-payment-median.json") +
              " --mechanism first-price-median --cost-model monitoring");
  CHECK(result.exit_code == 0);
  const json report = json::parse(result.output);
  CHECK(report["parameters"]["mechanism"]["name"] == "first-price-median");
  CHECK(report["parameters"]["cost_model"] == "monitoring");
  CHECK(report["result"]["holds"] == true);
}
