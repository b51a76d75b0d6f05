#include <doctest.h>

#include <sstream>
#include <string>

#include "ccp/comm_graph_opt.h"
#include "ccp/errors.h"
#include "ccp/metrics.h"
#include "ccp/scenario_io.h"
#include "test_support.h"

using namespace ccp;

namespace {

const std::string kFixtures = CCP_FIXTURE_DIR;

const char* kMinimal =
    "ccp-scenario 1\n"
    "bandwidth_hz = 10e6\n"
    "subchannels = 1\n"
    "transmit_power_w = 0.1\n"
    "noise_n0 = 1e-9\n"
    "ego = 7\n"
    "node = 7 0 0\n"
    "node = 8 20 0\n"
    "volume = 8 7 1e6\n";

int error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string error_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal two-node document") {
  const Scenario s = parse_scenario(kMinimal);
  REQUIRE(s.size() == 2);
  CHECK(s.ego_id == 7);
  CHECK(s.ego_index() == 0);
  CHECK(s.data_volumes(1, 0) == 1e6);
  CHECK(s.data_volumes(0, 1) == 0.0);
  CHECK(s.channel.noise_mode == NoiseMode::kLiteralPower);
  CHECK(s.channel.pathloss_exponent == 2.7);
  CHECK(s.beta == 0.8);
  CHECK(s.min_ego_links == 1);
}

TEST_CASE("five-node fixture equals a hand-built scenario") {
  Scenario expected;
  expected.channel.total_bandwidth_hz = 20e6;
  expected.channel.num_subchannels = 4;
  expected.channel.transmit_power_w = 0.2;
  expected.channel.noise_n0 = 1e-9;
  expected.channel.noise_mode = NoiseMode::kPsdTimesSubband;
  expected.channel.pathloss_exponent = 3;
  expected.channel.reference_distance_m = 5;
  expected.channel.reference_gain = 0.5;
  expected.beta = 0.9;
  expected.distance_scale_m = 80;
  expected.gamma_min = 0.1;
  expected.ego_id = 2;
  expected.nodes = {{0, {0, 0}, ""},
                    {1, {25, 3.5}, "frames/one.ppm"},
                    {2, {40, 0}, ""},
                    {3, {70, 3.5}, ""},
                    {4, {140, 0}, ""}};
  expected.data_volumes = Matrix<double>(5, 5, 0.0);
  expected.data_volumes(0, 2) = 4.8e6;
  expected.data_volumes(1, 2) = 5e6;
  expected.data_volumes(3, 2) = 5.2e6;
  expected.data_volumes(4, 2) = 6e6;
  expected.data_volumes(2, 1) = 1e6;
  // Nodes 0, 1 and 3 send to ego from within 60 m; node 4 is 100 m away.
  expected.min_ego_links = 3;

  const Scenario s = load_scenario(kFixtures + "/five_nodes.scn");
  CHECK(s.channel == expected.channel);
  CHECK(s.nodes == expected.nodes);
  CHECK(s.data_volumes == expected.data_volumes);
  CHECK(s.min_ego_links == expected.min_ego_links);
  CHECK(s == expected);
}

TEST_CASE("format and parse round trip") {
  const Scenario s = load_scenario(kFixtures + "/five_nodes.scn");
  CHECK(parse_scenario(format_scenario(s)) == s);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Scenario r = testing::random_scenario(seed, 6);
    CHECK(parse_scenario(format_scenario(r)) == r);
  }
}

TEST_CASE("negative bandwidth names the field") {
  const Scenario ok = parse_scenario(kMinimal);
  (void)ok;
  const std::string bad = error_message(
      std::string(kMinimal).replace(std::string(kMinimal).find("10e6"), 4, "-1e6"));
  CHECK(bad.find("bandwidth_hz") != std::string::npos);
  CHECK(bad.find("line 2") != std::string::npos);
  CHECK_THROWS_AS(load_scenario(kFixtures + "/negative_bandwidth.scn"), ParseError);
}

TEST_CASE("parse errors carry the offending line") {
  const std::string base = kMinimal;
  CHECK(error_line(base + "colour = blue\n") == 10);
  CHECK(error_line(base + "beta = 0.5\nbeta = 0.6\n") == 11);
  CHECK(error_line(base + "node = 7 5 5\n") == 10);
  CHECK(error_line(base + "volume = 8 9 1e6\n") == 10);
  CHECK(error_line(base + "volume = 8 7 2e6\n") == 10);
  CHECK(error_line(base + "beta = 1.5\n") == 10);
  CHECK(error_line(base + "subchannels = two\n") == 10);
  CHECK(error_line(base + "noise_mode = loud\n") == 10);
  CHECK(error_line(base + "node = 9 1\n") == 10);
  CHECK(error_line(base + "just text\n") == 10);
  CHECK(error_line("ccp-scenario 2\n") == 1);
  CHECK(error_line("\n# only a comment\nbandwidth_hz = 1\n") == 3);
  CHECK_THROWS_AS(parse_scenario(""), ParseError);
  CHECK(error_message(base + "ego = 9\n").find("repeated") != std::string::npos);
}

TEST_CASE("missing keys and files") {
  std::string no_power = kMinimal;
  no_power.erase(no_power.find("transmit_power_w"),
                 std::string("transmit_power_w = 0.1\n").size());
  CHECK(error_message(no_power).find("transmit_power_w") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.scn"), IoError);
}

TEST_CASE("plan report and csv list every pair") {
  const Scenario s = load_scenario(kFixtures + "/four_nodes.scn");
  const CommPlan plan = optimize(s, SolverConfig{});
  std::ostringstream report;
  write_plan_report(report, s, plan);
  CHECK(report.str().find("G (links)") != std::string::npos);
  CHECK(report.str().find("avg_delay_s: " + format_double(plan.avg_delay_s)) !=
        std::string::npos);

  std::ostringstream csv;
  write_plan_csv(csv, s, plan);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == kPlanCsvHeader);
  int rows = 0, selected = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string src, dst, sel;
    std::getline(fields, src, ',');
    std::getline(fields, dst, ',');
    std::getline(fields, sel, ',');
    selected += sel == "1";
  }
  CHECK(rows == 12);
  CHECK(selected == plan.num_links());
}
