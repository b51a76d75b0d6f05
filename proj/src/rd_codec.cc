#include "ccp/rd_codec.h"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "ccp/errors.h"
#include "ccp/metrics.h"
#include "internal/block_transform.h"

namespace ccp {

void CodecConfig::validate() const {
  if (block_size < 2 || block_size > 64) {
    throw ValidationError("block_size must lie in [2, 64]");
  }
  if (!(quant_step > 0) || !std::isfinite(quant_step)) {
    throw ValidationError("quant_step must be > 0");
  }
  if (!(phi_lambda_max > 0)) {
    throw ValidationError("phi_lambda_max must be > 0");
  }
  if (!(phi_power >= 1)) throw ValidationError("phi_power must be >= 1");
  if (!(rate_tolerance >= 0)) {
    throw ValidationError("rate_tolerance must be >= 0");
  }
  if (!(min_quant_step > 0 && max_quant_step > min_quant_step)) {
    throw ValidationError("quant grid needs 0 < min_quant_step < "
                          "max_quant_step");
  }
  if (quant_grid_size < 2) {
    throw ValidationError("quant_grid_size must be >= 2");
  }
  if (!(refine_prior_weight >= 0)) {
    throw ValidationError("refine_prior_weight must be >= 0");
  }
}

// ---------------------------------------------------------------------------
// EntropyModel

EntropyModel::EntropyModel(const Table& freq, int trained_on)
    : freq_(freq), trained_on_(trained_on) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (int b = 0; b < kNumBands; ++b) {
    double total = 0.0;
    for (double f : freq_[b]) total += f;
    for (int k = 0; k < kNumCategories; ++k) {
      cost_[b][k] = -std::log2(freq_[b][k] / total);
      mix(&freq_[b][k], sizeof(double));
    }
  }
  mix(&trained_on_, sizeof(trained_on_));
  id_ = h;
}

EntropyModel EntropyModel::generic() {
  Table t{};
  for (int k = 0; k < kNumCategories; ++k) {
    t[0][k] = kSmoothing + kGenericMass / kNumCategories;
  }
  for (int b = 1; b < kNumBands; ++b) {
    for (int k = 0; k < kNumCategories; ++k) {
      t[b][k] = kSmoothing + kGenericMass * (1.0 - kGenericDecay) *
                                 std::pow(kGenericDecay, k);
    }
  }
  return EntropyModel(t, 0);
}

EntropyModel EntropyModel::from_counts(const Table& counts, int trained_on) {
  Table t{};
  for (int b = 0; b < kNumBands; ++b) {
    for (int k = 0; k < kNumCategories; ++k) {
      if (!(counts[b][k] >= 0)) {
        throw ValidationError("entropy model counts must be >= 0");
      }
      t[b][k] = counts[b][k] + kSmoothing;
    }
  }
  return EntropyModel(t, trained_on);
}

double EntropyModel::probability(int band, int category) const {
  return std::exp2(-cost_[band][category]);
}

int EntropyModel::category(int value) {
  const unsigned magnitude = static_cast<unsigned>(value < 0 ? -value : value);
  return std::bit_width(magnitude);
}

double EntropyModel::category_bits(int band, int category) const {
  return cost_[band][category] + category;
}

double EntropyModel::bits(int band, int value) const {
  return category_bits(band, category(value));
}

// ---------------------------------------------------------------------------
// Block transform kernels

namespace internal {

BlockLayout layout_for(int height, int width, int channels, int block_size) {
  BlockLayout l;
  l.block_size = block_size;
  l.channels = channels;
  l.blocks_y = (height + block_size - 1) / block_size;
  l.blocks_x = (width + block_size - 1) / block_size;
  l.padded_height = l.blocks_y * block_size;
  l.padded_width = l.blocks_x * block_size;
  return l;
}

std::vector<double> dct_basis(int n) {
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      basis[k * n + i] =
          scale * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
    }
  }
  return basis;
}

std::vector<double> padded_code_values(const Image& img,
                                       const BlockLayout& l) {
  const std::size_t plane =
      static_cast<std::size_t>(l.padded_height) * l.padded_width;
  std::vector<double> out(plane * l.channels);
  for (int c = 0; c < l.channels; ++c) {
    for (int h = 0; h < l.padded_height; ++h) {
      const int sh = std::min(h, img.height() - 1);
      for (int w = 0; w < l.padded_width; ++w) {
        const int sw = std::min(w, img.width() - 1);
        out[c * plane + static_cast<std::size_t>(h) * l.padded_width + w] =
            img.at(sh, sw, c) * 255.0 - 128.0;
      }
    }
  }
  return out;
}

bool quantize_block(const std::vector<double>& px, const BlockLayout& l, int c,
                    int by, int bx, const std::vector<double>& basis,
                    double quant_step, std::int16_t* out, double* tmp) {
  const int n = l.block_size;
  const std::size_t plane =
      static_cast<std::size_t>(l.padded_height) * l.padded_width;
  const double* origin = px.data() + c * plane +
                         static_cast<std::size_t>(by) * n * l.padded_width +
                         static_cast<std::size_t>(bx) * n;
  // tmp[u][j] = sum_i B[u][i] X[i][j]
  for (int u = 0; u < n; ++u) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += basis[u * n + i] * origin[i * l.padded_width + j];
      }
      tmp[u * n + j] = acc;
    }
  }
  bool ok = true;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += tmp[u * n + j] * basis[v * n + j];
      const double q = std::round(acc / quant_step);
      if (q > 32767.0 || q < -32767.0) {
        ok = false;
        out[u * n + v] = 0;
      } else {
        out[u * n + v] = static_cast<std::int16_t>(q);
      }
    }
  }
  return ok;
}

void reconstruct_block(const std::int16_t* coeffs, const BlockLayout& l,
                       int c, int by, int bx, const std::vector<double>& basis,
                       double quant_step, std::vector<double>& pixels,
                       double* tmp) {
  const int n = l.block_size;
  const std::size_t plane =
      static_cast<std::size_t>(l.padded_height) * l.padded_width;
  double* origin = pixels.data() + c * plane +
                   static_cast<std::size_t>(by) * n * l.padded_width +
                   static_cast<std::size_t>(bx) * n;
  // tmp[i][v] = sum_u B[u][i] Y[u][v]
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (int u = 0; u < n; ++u) {
        acc += basis[u * n + i] * (coeffs[u * n + v] * quant_step);
      }
      tmp[i * n + v] = acc;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int v = 0; v < n; ++v) acc += tmp[i * n + v] * basis[v * n + j];
      origin[i * l.padded_width + j] = acc;
    }
  }
}

Image code_values_to_image(const std::vector<double>& pixels,
                           const BlockLayout& l, int height, int width) {
  Image img(height, width, l.channels);
  const std::size_t plane =
      static_cast<std::size_t>(l.padded_height) * l.padded_width;
  for (int c = 0; c < l.channels; ++c) {
    for (int h = 0; h < height; ++h) {
      for (int w = 0; w < width; ++w) {
        const double v =
            (pixels[c * plane + static_cast<std::size_t>(h) * l.padded_width +
                    w] +
             128.0) /
            255.0;
        img.at(h, w, c) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return img;
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Codec operations

EncodedFrame encode(const Image& img, const CodecConfig& cfg,
                    const EntropyModel& model) {
  cfg.validate();
  if (img.empty()) throw ValidationError("encode: zero-sized image");
  require_valid(img, /*unit_range=*/true, "encode");

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

  bool overflow = false;
#pragma omp parallel
  {
    std::vector<double> tmp(l.block_area());
#pragma omp for collapse(3) schedule(static) reduction(|| : overflow)
    for (int c = 0; c < l.channels; ++c) {
      for (int by = 0; by < l.blocks_y; ++by) {
        for (int bx = 0; bx < l.blocks_x; ++bx) {
          const bool ok = internal::quantize_block(
              px, l, c, by, bx, basis, cfg.quant_step,
              f.coefficients.data() + l.block_offset(c, by, bx), tmp.data());
          overflow = overflow || !ok;
        }
      }
    }
  }
  if (overflow) {
    throw ValidationError("encode: quant_step " +
                          std::to_string(cfg.quant_step) +
                          " overflows 16-bit coefficients");
  }
  f.model_id = model.id();
  f.bit_count = estimate_bits(f, model);
  return f;
}

namespace {

void require_frame(const EncodedFrame& f) {
  if (f.height < 1 || f.width < 1 || (f.channels != 1 && f.channels != 3) ||
      f.block_size < 2 || !(f.quant_step > 0)) {
    throw ValidationError("decode: invalid frame header");
  }
  if (f.coefficients.size() != f.expected_coefficients()) {
    throw ValidationError(
        "decode: dimension mismatch, expected " +
        std::to_string(f.expected_coefficients()) + " coefficients, got " +
        std::to_string(f.coefficients.size()));
  }
}

}  // namespace

Image decode(const EncodedFrame& f) {
  require_frame(f);
  const internal::BlockLayout l =
      internal::layout_for(f.height, f.width, f.channels, f.block_size);
  const std::vector<double> basis = internal::dct_basis(f.block_size);
  std::vector<double> pixels(
      static_cast<std::size_t>(l.padded_height) * l.padded_width * l.channels);
#pragma omp parallel
  {
    std::vector<double> tmp(l.block_area());
#pragma omp for collapse(3) schedule(static)
    for (int c = 0; c < l.channels; ++c) {
      for (int by = 0; by < l.blocks_y; ++by) {
        for (int bx = 0; bx < l.blocks_x; ++bx) {
          internal::reconstruct_block(
              f.coefficients.data() + l.block_offset(c, by, bx), l, c, by, bx,
              basis, f.quant_step, pixels, tmp.data());
        }
      }
    }
  }
  return internal::code_values_to_image(pixels, l, f.height, f.width);
}

EntropyModel::Table symbol_counts(const EncodedFrame& f) {
  require_frame(f);
  EntropyModel::Table counts{};
  const int n = f.block_size;
  const std::size_t area = static_cast<std::size_t>(n) * n;
  for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
    const int pos = static_cast<int>(i % area);
    const int band = EntropyModel::band(pos / n, pos % n);
    counts[band][EntropyModel::category(f.coefficients[i])] += 1.0;
  }
  return counts;
}

double estimate_bits(const EncodedFrame& f, const EntropyModel& model) {
  const EntropyModel::Table counts = symbol_counts(f);
  double total = 0.0;
  for (int b = 0; b < EntropyModel::kNumBands; ++b) {
    for (int k = 0; k < EntropyModel::kNumCategories; ++k) {
      if (counts[b][k] > 0) total += counts[b][k] * model.category_bits(b, k);
    }
  }
  return total;
}

double phi(double gamma, const CodecConfig& cfg) {
  if (!(gamma > 0 && gamma <= 1)) {
    throw ValidationError("phi: gamma must lie in (0, 1]");
  }
  return cfg.phi_lambda_max * std::pow(gamma, cfg.phi_power);
}

double rd_cost(const Image& x, const EncodedFrame& frame, double gamma,
               const CodecConfig& cfg, const EntropyModel& model) {
  const Image recon = decode(frame);
  return estimate_bits(frame, model) +
         phi(gamma, cfg) * mean_squared_error(x, recon);
}

std::vector<double> quant_grid(const CodecConfig& cfg) {
  cfg.validate();
  std::vector<double> grid(cfg.quant_grid_size);
  const double ratio = cfg.max_quant_step / cfg.min_quant_step;
  for (int i = 0; i < cfg.quant_grid_size; ++i) {
    grid[i] = cfg.min_quant_step *
              std::pow(ratio, static_cast<double>(i) /
                                  (cfg.quant_grid_size - 1));
  }
  grid.back() = cfg.max_quant_step;
  return grid;
}

RateControlResult rate_control_to_budget(const Image& img, double target_bits,
                                         const EntropyModel& model,
                                         const CodecConfig& cfg) {
  if (!(target_bits > 0)) {
    throw ValidationError("rate_control: target bits must be > 0");
  }
  const std::vector<double> grid = quant_grid(cfg);
  const double budget = (1.0 + cfg.rate_tolerance) * target_bits;
  CodecConfig step_cfg = cfg;
  auto encode_at = [&](int i) {
    step_cfg.quant_step = grid[i];
    return encode(img, step_cfg, model);
  };

  RateControlResult result;
  result.target_bits = target_bits;
  EncodedFrame coarsest = encode_at(static_cast<int>(grid.size()) - 1);
  if (coarsest.bit_count > budget) {
    throw BudgetError("rate_control: " + std::to_string(coarsest.bit_count) +
                      " bits at the coarsest step exceed the budget of " +
                      std::to_string(budget));
  }
  // Invariant: hi fits the budget; everything below lo does not.
  int lo = 0;
  int hi = static_cast<int>(grid.size()) - 1;
  EncodedFrame best = std::move(coarsest);
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    EncodedFrame f = encode_at(mid);
    if (f.bit_count <= budget) {
      hi = mid;
      best = std::move(f);
    } else {
      lo = mid + 1;
    }
  }
  result.grid_index = hi;
  result.quant_step = grid[hi];
  result.frame = std::move(best);
  return result;
}

RateControlResult rate_control(const Image& img, double gamma,
                               const EntropyModel& model,
                               const CodecConfig& cfg) {
  if (!(gamma > 0 && gamma <= 1)) {
    throw ValidationError("rate_control: gamma must lie in (0, 1]");
  }
  if (img.empty()) throw ValidationError("rate_control: zero-sized image");
  const double raw_bits = static_cast<double>(img.size()) * 8.0;
  return rate_control_to_budget(img, gamma * raw_bits, model, cfg);
}

EntropyModel refine(const EntropyModel& base,
                    std::span<const Image> raw_frames,
                    const CodecConfig& cfg) {
  if (raw_frames.empty()) {
    throw ValidationError("refine: no raw frames supplied");
  }
  EntropyModel::Table counts{};
  for (int b = 0; b < EntropyModel::kNumBands; ++b) {
    for (int k = 0; k < EntropyModel::kNumCategories; ++k) {
      counts[b][k] = cfg.refine_prior_weight *
                     (base.frequency(b, k) - EntropyModel::kSmoothing);
    }
  }
  for (const Image& frame : raw_frames) {
    const EntropyModel::Table observed =
        symbol_counts(encode(frame, cfg, base));
    for (int b = 0; b < EntropyModel::kNumBands; ++b) {
      for (int k = 0; k < EntropyModel::kNumCategories; ++k) {
        counts[b][k] += observed[b][k];
      }
    }
  }
  return EntropyModel::from_counts(counts, static_cast<int>(raw_frames.size()));
}

}  // namespace ccp
