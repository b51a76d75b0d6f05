#ifndef CCP_SIMULATE_H_
#define CCP_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "ccp/channel_model.h"
#include "ccp/comm_graph_opt.h"
#include "ccp/image.h"
#include "ccp/metrics.h"
#include "ccp/rd_codec.h"

namespace ccp {

struct SimulationConfig {
  SolverConfig solver;
  CodecConfig codec;
  double alpha = 0.05;
  // Dims of synthesized frames for nodes without an image path.
  int image_height = 64;
  int image_width = 64;
  int image_channels = 3;
  // Entropy model shared by every encoder; the generic prior unless a
  // refined model is supplied.
  std::optional<EntropyModel> model;
};

struct LinkReport {
  int src_id = 0;
  int dst_id = 0;
  double gamma = 0.0;
  double volume_bits = 0.0;
  double target_bits = 0.0;  // gamma * volume
  double bits = 0.0;         // estimated coded size
  double quant_step = 0.0;
  double rate_bps = 0.0;
  double delay_s = 0.0;
  double rd_cost = 0.0;
  double mse = 0.0;
  double psnr_db = 0.0;
  double ms_ssim = 0.0;
  int ms_ssim_scales = 0;
  double bitrate_bpp = 0.0;
};

struct SimulationResult {
  CommPlan plan;
  std::vector<LinkReport> links;
  QualityReport report;
};

// Frames for every node: loaded from VehicleNode::image_path when set,
// otherwise synthesized from (seed, node id) with a per-node brightness and
// color cast so vehicles see different domains.
std::vector<Image> scenario_images(const Scenario& s,
                                   const SimulationConfig& cfg,
                                   std::uint64_t seed);

// optimize -> per selected link: rate_control at the plan's gamma with a
// budget of gamma * A(i, j) -> decode -> align to the receiver's frame ->
// metrics against the sender's original. Deterministic for fixed inputs.
// Module errors are rethrown with the link named.
SimulationResult simulate(const Scenario& s, const std::vector<Image>& images,
                          const SimulationConfig& cfg, std::uint64_t seed);

inline constexpr const char* kLinksCsvHeader =
    "src_id,dst_id,gamma,volume_bits,target_bits,bits,quant_step,rate_bps,"
    "delay_s,rd_cost,mse,psnr_db,ms_ssim,ms_ssim_scales,bitrate_bpp";
void write_links_csv(std::ostream& out, const std::vector<LinkReport>& links);

}  // namespace ccp

#endif  // CCP_SIMULATE_H_
