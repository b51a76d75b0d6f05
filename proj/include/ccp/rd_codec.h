#ifndef CCP_RD_CODEC_H_
#define CCP_RD_CODEC_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ccp/image.h"

namespace ccp {

// Block transform codec standing in for a learned image compressor. Samples
// are mapped to 8-bit code values (x * 255 - 128) before an orthonormal
// block DCT, so quant_step is measured in code values.
struct CodecConfig {
  int block_size = 8;
  double quant_step = 4.0;
  // Phi(gamma) = phi_lambda_max * gamma^phi_power weights distortion
  // (MSE of unit-range samples) against bits.
  double phi_lambda_max = 1e7;
  double phi_power = 2.0;
  double rate_tolerance = 0.05;
  // Geometric grid searched by rate_control, finest first.
  double min_quant_step = 0.5;
  double max_quant_step = 512.0;
  int quant_grid_size = 64;
  // Share of the base model's pseudo-counts carried into a refined model;
  // 0 re-estimates purely from the refinement frames.
  double refine_prior_weight = 0.0;

  void validate() const;
};

// Per-band probability table over coefficient magnitude categories.
//
// A coefficient v falls in category k = bit width of |v| (0 for v == 0).
// Its cost is -log2 p(band, k) for the category plus k raw bits (sign and
// k - 1 mantissa bits), i.e. -log2 of a proper distribution over integers
// that is uniform within each category. The band of coefficient (u, v)
// inside a block is min(u + v, kNumBands - 1).
class EntropyModel {
 public:
  static constexpr int kNumBands = 8;
  static constexpr int kNumCategories = 16;  // |v| <= 32767
  static constexpr double kSmoothing = 1.0;

  using Table = std::array<std::array<double, kNumCategories>, kNumBands>;

  // Untrained prior: flat over categories for DC, geometric (ratio
  // kGenericDecay) for AC bands, with kGenericMass pseudo-counts per band.
  static constexpr double kGenericMass = 4096.0;
  static constexpr double kGenericDecay = 0.25;
  static EntropyModel generic();

  // kSmoothing is added to every observed count.
  static EntropyModel from_counts(const Table& counts, int trained_on);

  double frequency(int band, int category) const {
    return freq_[band][category];
  }
  double probability(int band, int category) const;
  // Estimated cost of coefficient `value` in `band`, bits.
  double bits(int band, int value) const;
  // Cost of any one value in `category`.
  double category_bits(int band, int category) const;
  int trained_on() const { return trained_on_; }
  // FNV-1a hash of the frequency table.
  std::uint64_t id() const { return id_; }

  static int category(int value);
  static int band(int u, int v) {
    return u + v < kNumBands ? u + v : kNumBands - 1;
  }

 private:
  EntropyModel(const Table& freq, int trained_on);

  Table freq_{};
  Table cost_{};  // -log2 probability
  int trained_on_ = 0;
  std::uint64_t id_ = 0;
};

// Quantized block-transform coefficients of one image.
// Coefficient order: channel-major; within a channel, blocks in row-major
// order over the padded grid; within a block, row-major (u = vertical
// frequency, v = horizontal frequency).
struct EncodedFrame {
  int height = 0;  // source dims, before padding
  int width = 0;
  int channels = 0;
  int block_size = 8;
  double quant_step = 1.0;
  std::uint64_t model_id = 0;
  double bit_count = 0.0;  // estimate under the model named by model_id
  std::vector<std::int16_t> coefficients;

  int padded_height() const {
    return (height + block_size - 1) / block_size * block_size;
  }
  int padded_width() const {
    return (width + block_size - 1) / block_size * block_size;
  }
  std::size_t expected_coefficients() const {
    return static_cast<std::size_t>(padded_height()) * padded_width() *
           channels;
  }
  // Number of source samples (H * W * C).
  std::size_t num_samples() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
};

// Pads by edge replication to a multiple of cfg.block_size, transforms and
// quantizes every block with cfg.quant_step (OpenMP over blocks). Throws
// ValidationError for empty or out-of-range images and for coefficients that
// overflow 16 bits.
EncodedFrame encode(const Image& img, const CodecConfig& cfg,
                    const EntropyModel& model);

// Dequantizes, inverts the transform, crops and clamps to [0, 1].
Image decode(const EncodedFrame& frame);

// Recomputes the bit estimate of `frame` under `model`.
double estimate_bits(const EncodedFrame& frame, const EntropyModel& model);

// Per (band, category) symbol counts of a frame.
EntropyModel::Table symbol_counts(const EncodedFrame& frame);

double phi(double gamma, const CodecConfig& cfg);

// bits + Phi(gamma) * MSE(x, decode(frame)).
double rd_cost(const Image& x, const EncodedFrame& frame, double gamma,
               const CodecConfig& cfg, const EntropyModel& model);

std::vector<double> quant_grid(const CodecConfig& cfg);

struct RateControlResult {
  double quant_step = 0.0;
  int grid_index = 0;
  double target_bits = 0.0;
  EncodedFrame frame;
};

// Finest grid step whose estimate fits (1 + rate_tolerance) * target_bits,
// found by binary search (bits fall as the step grows). Throws BudgetError
// when even the coarsest step does not fit.
RateControlResult rate_control_to_budget(const Image& img, double target_bits,
                                         const EntropyModel& model,
                                         const CodecConfig& cfg);

// Budget = gamma * raw bits, raw bits = H * W * C * 8.
RateControlResult rate_control(const Image& img, double gamma,
                               const EntropyModel& model,
                               const CodecConfig& cfg);

// Re-estimates symbol frequencies from `raw_frames` quantized at
// cfg.quant_step. Returns a new model; `base` is not modified. Throws
// ValidationError on an empty frame list.
EntropyModel refine(const EntropyModel& base,
                    std::span<const Image> raw_frames, const CodecConfig& cfg);

}  // namespace ccp

#endif  // CCP_RD_CODEC_H_
