#include <doctest.h>

#include <sstream>

#include "ccp/domain_align.h"
#include "ccp/errors.h"
#include "ccp/scenario_io.h"
#include "ccp/simulate.h"
#include "test_support.h"

using namespace ccp;

namespace {

const std::string kFixtures = CCP_FIXTURE_DIR;

Scenario pair_at_same_spot(double volume_bits) {
  Scenario s;
  s.nodes = {{0, {0, 0}, ""}, {1, {0, 0}, ""}};
  s.ego_id = 0;
  s.beta = 1.0;
  s.data_volumes = Matrix<double>(2, 2, 0.0);
  s.data_volumes(1, 0) = volume_bits;
  s.channel.num_subchannels = 1;
  return s;
}

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.image_height = 48;
  cfg.image_width = 48;
  return cfg;
}

}  // namespace

TEST_CASE("uncompressed, unaligned link is near lossless") {
  const Scenario s = pair_at_same_spot(64.0 * 64 * 3 * 8 * 4);
  SimulationConfig cfg;
  cfg.alpha = 0.0;
  const auto images = scenario_images(s, cfg, 1);
  const SimulationResult r = simulate(s, images, cfg, 1);
  REQUIRE(r.links.size() == 1);
  CHECK(r.links[0].gamma == 1.0);
  CHECK(r.links[0].quant_step == cfg.codec.min_quant_step);
  CHECK(r.links[0].psnr_db > 50.0);
  CHECK(r.report.psnr_db > 50.0);
}

TEST_CASE("symmetric collaborators get equal link reports") {
  Scenario s;
  s.nodes = {{0, {0, 0}, ""}, {1, {30, 0}, ""}, {2, {-30, 0}, ""}};
  s.ego_id = 0;
  s.data_volumes = Matrix<double>(3, 3, 0.0);
  s.data_volumes(1, 0) = 2e5;
  s.data_volumes(2, 0) = 2e5;
  s.channel.num_subchannels = 2;
  s.min_ego_links = 2;
  const SimulationConfig cfg = small_config();
  std::vector<Image> images = scenario_images(s, cfg, 3);
  images[2] = images[1];
  const SimulationResult r = simulate(s, images, cfg, 3);
  REQUIRE(r.links.size() == 2);
  const LinkReport& a = r.links[0];
  const LinkReport& b = r.links[1];
  CHECK(a.gamma == b.gamma);
  CHECK(a.bits == b.bits);
  CHECK(a.quant_step == b.quant_step);
  CHECK(a.delay_s == doctest::Approx(b.delay_s).epsilon(1e-12));
  CHECK(a.mse == b.mse);
  CHECK(a.ms_ssim == b.ms_ssim);
}

TEST_CASE("report fields recompose from individual module calls") {
  const Scenario s = load_scenario(kFixtures + "/four_nodes.scn");
  const SimulationConfig cfg = small_config();
  const auto images = scenario_images(s, cfg, 11);
  const SimulationResult r = simulate(s, images, cfg, 11);

  SolverConfig solver = cfg.solver;
  solver.seed = 11;
  const CommPlan plan = optimize(s, solver);
  CHECK(plan.links == r.plan.links);
  CHECK(r.report.avg_delay_s == plan.avg_delay_s);

  double mse_sum = 0.0, ms_sum = 0.0, bits = 0.0, pixels = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!plan.links(i, j)) continue;
      REQUIRE(k < r.links.size());
      const LinkReport& link = r.links[k++];
      CHECK(link.src_id == s.nodes[i].id);
      CHECK(link.dst_id == s.nodes[j].id);
      CHECK(link.gamma == plan.gamma(i, j));
      const double target = plan.gamma(i, j) * s.data_volumes(i, j);
      const RateControlResult rc = rate_control_to_budget(
          images[i], target, EntropyModel::generic(), cfg.codec);
      CHECK(link.target_bits == target);
      CHECK(link.bits == rc.frame.bit_count);
      CHECK(link.quant_step == rc.quant_step);
      const Image aligned = align(decode(rc.frame), images[j], cfg.alpha);
      CHECK(link.mse == mean_squared_error(aligned, images[i]));
      CHECK(link.psnr_db == psnr(aligned, images[i]));
      CHECK(link.ms_ssim == ms_ssim(aligned, images[i]).value);
      CHECK(link.delay_s ==
            transmission_delay(plan.gamma(i, j), s.data_volumes(i, j),
                               plan.rate_bps(i, j)));
      mse_sum += link.mse;
      ms_sum += link.ms_ssim;
      bits += link.bits;
      pixels += images[i].height() * images[i].width();
    }
  }
  CHECK(k == r.links.size());
  CHECK(r.report.mse == mse_sum / k);
  CHECK(r.report.ms_ssim == ms_sum / k);
  CHECK(r.report.bitrate_bpp == bits / pixels);
}

TEST_CASE("transmitted bits stay within the planned budgets") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Scenario s = testing::random_scenario(seed);
    for (double& a : s.data_volumes.data()) a *= 0.05;
    const SimulationConfig cfg = small_config();
    const SimulationResult r =
        simulate(s, scenario_images(s, cfg, seed), cfg, seed);
    double sent = 0.0, budget = 0.0;
    for (const LinkReport& link : r.links) {
      CHECK(link.bits <= (1 + cfg.codec.rate_tolerance) * link.target_bits);
      sent += link.bits;
      budget += link.target_bits;
    }
    CHECK(sent <= (1 + cfg.codec.rate_tolerance) * budget);
  }
}

TEST_CASE("simulation is deterministic") {
  const Scenario s = load_scenario(kFixtures + "/four_nodes.scn");
  const SimulationConfig cfg = small_config();
  const auto images = scenario_images(s, cfg, 5);
  auto csv = [&] {
    const SimulationResult r = simulate(s, images, cfg, 5);
    std::ostringstream out;
    write_links_csv(out, r.links);
    write_report_csv(out, r.report);
    write_plan_csv(out, s, r.plan);
    return out.str();
  };
  CHECK(csv() == csv());
  CHECK(scenario_images(s, cfg, 5) == images);
}

TEST_CASE("module errors name the failing link") {
  const Scenario s = pair_at_same_spot(10.0);
  const SimulationConfig cfg = small_config();
  try {
    simulate(s, scenario_images(s, cfg, 0), cfg, 0);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("link 1->0") != std::string::npos);
  }
  CHECK_THROWS_AS(simulate(s, {}, cfg, 0), ValidationError);
}

TEST_CASE("links csv header") {
  std::ostringstream out;
  write_links_csv(out, {});
  CHECK(out.str() == std::string(kLinksCsvHeader) + "\n");
}
