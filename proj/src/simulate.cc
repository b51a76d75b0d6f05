#include "ccp/simulate.h"

#include <cmath>
#include <string>

#include "ccp/domain_align.h"
#include "ccp/errors.h"
#include "ccp/image_io.h"

namespace ccp {

std::vector<Image> scenario_images(const Scenario& s,
                                   const SimulationConfig& cfg,
                                   std::uint64_t seed) {
  std::vector<Image> out;
  out.reserve(s.size());
  for (const VehicleNode& node : s.nodes) {
    if (!node.image_path.empty()) {
      out.push_back(read_pnm(node.image_path));
      continue;
    }
    // One shared scene; each vehicle's camera adds its own exposure and
    // color response.
    SceneParams p;
    p.height = cfg.image_height;
    p.width = cfg.image_width;
    p.channels = cfg.image_channels;
    p.seed = seed;
    const std::uint64_t h =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(node.id)) + 1) *
        0x9E3779B97F4A7C15ull;
    p.brightness = 0.2 * (static_cast<double>(h >> 40 & 0xFF) / 255.0 - 0.5);
    for (int c = 0; c < 3; ++c) {
      p.color_cast[c] =
          0.1 * (static_cast<double>(h >> (8 * c) & 0xFF) / 255.0 - 0.5);
    }
    p.shift_x = static_cast<double>(node.id % 5);
    out.push_back(synthesize_scene(p));
  }
  return out;
}

SimulationResult simulate(const Scenario& s, const std::vector<Image>& images,
                          const SimulationConfig& cfg, std::uint64_t seed) {
  s.validate();
  if (images.size() != s.size()) {
    throw ValidationError("simulate: expected " + std::to_string(s.size()) +
                          " images, got " + std::to_string(images.size()));
  }
  SolverConfig solver = cfg.solver;
  solver.seed = seed;
  SimulationResult result;
  result.plan = optimize(s, solver);
  const EntropyModel model = cfg.model.value_or(EntropyModel::generic());

  double mse_sum = 0.0, ms_ssim_sum = 0.0, total_bits = 0.0,
         total_pixels = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!result.plan.links(i, j)) continue;
      const Image& src = images[i];
      const Image& dst = images[j];
      LinkReport r;
      r.src_id = s.nodes[i].id;
      r.dst_id = s.nodes[j].id;
      r.gamma = result.plan.gamma(i, j);
      r.volume_bits = s.data_volumes(i, j);
      r.target_bits = r.gamma * r.volume_bits;
      r.rate_bps = result.plan.rate_bps(i, j);
      r.delay_s = result.plan.delay_s(i, j);
      try {
        const RateControlResult rc =
            rate_control_to_budget(src, r.target_bits, model, cfg.codec);
        r.bits = rc.frame.bit_count;
        r.quant_step = rc.quant_step;
        CodecConfig used = cfg.codec;
        used.quant_step = rc.quant_step;
        r.rd_cost = rd_cost(src, rc.frame, r.gamma, used, model);
        const Image received = decode(rc.frame);
        const Image aligned = align(received, dst, cfg.alpha);
        r.mse = mean_squared_error(aligned, src);
        r.psnr_db = psnr(aligned, src);
        const MsSsimResult ms = ms_ssim(aligned, src);
        r.ms_ssim = ms.value;
        r.ms_ssim_scales = ms.scales;
        r.bitrate_bpp =
            r.bits / (static_cast<double>(src.height()) * src.width());
      } catch (const Error& e) {
        const std::string where = "link " + std::to_string(r.src_id) + "->" +
                                  std::to_string(r.dst_id) + ": ";
        if (dynamic_cast<const BudgetError*>(&e)) {
          throw BudgetError(where + e.what());
        }
        if (dynamic_cast<const IoError*>(&e)) throw IoError(where + e.what());
        throw ValidationError(where + e.what());
      }
      mse_sum += r.mse;
      ms_ssim_sum += r.ms_ssim;
      total_bits += r.bits;
      total_pixels += static_cast<double>(src.height()) * src.width();
      result.links.push_back(r);
    }
  }
  const double n = static_cast<double>(result.links.size());
  QualityReport& q = result.report;
  q.mse = mse_sum / n;
  q.psnr_db = q.mse == 0.0 ? kIdenticalPsnr : 10.0 * std::log10(1.0 / q.mse);
  q.ms_ssim = ms_ssim_sum / n;
  q.bitrate_bpp = total_bits / total_pixels;
  q.avg_delay_s = result.plan.avg_delay_s;
  return result;
}

void write_links_csv(std::ostream& out, const std::vector<LinkReport>& links) {
  out << kLinksCsvHeader << '\n';
  for (const LinkReport& r : links) {
    out << r.src_id << ',' << r.dst_id << ',' << format_double(r.gamma) << ','
        << format_double(r.volume_bits) << ',' << format_double(r.target_bits)
        << ',' << format_double(r.bits) << ',' << format_double(r.quant_step)
        << ',' << format_double(r.rate_bps) << ','
        << format_double(r.delay_s) << ',' << format_double(r.rd_cost) << ','
        << format_double(r.mse) << ',' << format_double(r.psnr_db) << ','
        << format_double(r.ms_ssim) << ',' << r.ms_ssim_scales << ','
        << format_double(r.bitrate_bpp) << '\n';
  }
}

}  // namespace ccp
