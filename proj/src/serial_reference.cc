#include "ccp/serial_reference.h"

#include "ccp/errors.h"
#include "internal/block_transform.h"
#include "internal/dft2_kernel.h"
#include "internal/link_search.h"
#include "internal/ssim_kernel.h"

namespace ccp {
namespace internal {

void dft2_planes_serial(std::vector<Complex>& data, int height, int width,
                        int channels, bool inverse) {
  const Dft1d rows(width);
  const Dft1d cols(height);
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  std::vector<Complex> line(std::max(height, width));
  std::vector<Complex> scratch(std::max(height, width));
  for (int c = 0; c < channels; ++c) {
    for (int h = 0; h < height; ++h) {
      rows.transform(std::span<Complex>(data.data() + c * plane +
                                            static_cast<std::size_t>(h) * width,
                                        width),
                     inverse, scratch);
    }
  }
  for (int c = 0; c < channels; ++c) {
    for (int w = 0; w < width; ++w) {
      Complex* base = data.data() + c * plane + w;
      for (int h = 0; h < height; ++h) line[h] = base[h * width];
      cols.transform(std::span<Complex>(line.data(), height), inverse,
                     scratch);
      for (int h = 0; h < height; ++h) base[h * width] = line[h];
    }
  }
}

}  // namespace internal

namespace serial {

Spectrum dft2(const Image& img) {
  internal::require_transformable(img, "dft2");
  std::vector<Complex> data = internal::to_complex(img);
  internal::dft2_planes_serial(data, img.height(), img.width(),
                               img.channels(), false);
  return internal::to_spectrum(data, img.height(), img.width(),
                               img.channels());
}

Reconstruction idft2(const Spectrum& spectrum) {
  const Spectrum flat = uncenter(spectrum);
  std::vector<Complex> data = internal::from_spectrum(flat);
  internal::dft2_planes_serial(data, flat.height, flat.width, flat.channels,
                               true);
  return internal::to_image(data, flat.height, flat.width, flat.channels);
}

EncodedFrame encode(const Image& img, const CodecConfig& cfg,
                    const EntropyModel& model) {
  cfg.validate();
  if (img.empty()) throw ValidationError("encode: zero-sized image");
  require_valid(img, true, "encode");
  const internal::BlockLayout l = internal::layout_for(
      img.height(), img.width(), img.channels(), cfg.block_size);
  const std::vector<double> px = internal::padded_code_values(img, l);
  const std::vector<double> basis = internal::dct_basis(cfg.block_size);
  EncodedFrame f;
  f.height = img.height();
  f.width = img.width();
  f.channels = img.channels();
  f.block_size = cfg.block_size;
  f.quant_step = cfg.quant_step;
  f.coefficients.assign(l.num_blocks() * l.block_area(), 0);
  std::vector<double> tmp(l.block_area());
  for (int c = 0; c < l.channels; ++c) {
    for (int by = 0; by < l.blocks_y; ++by) {
      for (int bx = 0; bx < l.blocks_x; ++bx) {
        if (!internal::quantize_block(
                px, l, c, by, bx, basis, cfg.quant_step,
                f.coefficients.data() + l.block_offset(c, by, bx),
                tmp.data())) {
          throw ValidationError("encode: coefficient overflow");
        }
      }
    }
  }
  f.model_id = model.id();
  f.bit_count = estimate_bits(f, model);
  return f;
}

Image decode(const EncodedFrame& f) {
  if (f.coefficients.size() != f.expected_coefficients()) {
    throw ValidationError("decode: dimension mismatch");
  }
  const internal::BlockLayout l =
      internal::layout_for(f.height, f.width, f.channels, f.block_size);
  const std::vector<double> basis = internal::dct_basis(f.block_size);
  std::vector<double> pixels(
      static_cast<std::size_t>(l.padded_height) * l.padded_width * l.channels);
  std::vector<double> tmp(l.block_area());
  for (int c = 0; c < l.channels; ++c) {
    for (int by = 0; by < l.blocks_y; ++by) {
      for (int bx = 0; bx < l.blocks_x; ++bx) {
        internal::reconstruct_block(
            f.coefficients.data() + l.block_offset(c, by, bx), l, c, by, bx,
            basis, f.quant_step, pixels, tmp.data());
      }
    }
  }
  return internal::code_values_to_image(pixels, l, f.height, f.width);
}

CommPlan brute_force_optimum(const Scenario& s) {
  s.validate();
  const std::vector<CandidateLink> cands = candidate_links(s);
  internal::check_brute_force_size(cands);
  check_feasible(s, cands);
  const internal::SubsetBest best = internal::search_masks(
      cands, s.channel.num_subchannels, s.min_ego_links, 0,
      1u << cands.size());
  if (best.mask == 0) {
    throw InfeasibleError("brute_force_optimum: no feasible subset");
  }
  return internal::plan_from_mask(s, cands, best.mask);
}

MsSsimResult ms_ssim(const Image& x, const Image& y) {
  return internal::ms_ssim_impl(x, y, internal::Exec::kSerial);
}

}  // namespace serial
}  // namespace ccp
