#ifndef CCP_DOMAIN_ALIGN_H_
#define CCP_DOMAIN_ALIGN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ccp/fft.h"
#include "ccp/image.h"

namespace ccp {

// Amplitude and phase of the per-channel 2-D DFT of an image. Planar,
// row-major, same indexing as Image. In the centered layout the DC bin sits
// at (H / 2, W / 2) (integer division).
struct Spectrum {
  int height = 0;
  int width = 0;
  int channels = 0;
  bool centered = false;
  std::vector<double> amplitude;  // >= 0
  std::vector<double> phase;      // radians, (-pi, pi]

  std::size_t plane_size() const {
    return static_cast<std::size_t>(height) * width;
  }
  std::size_t index(int h, int w, int c) const {
    return c * plane_size() + static_cast<std::size_t>(h) * width + w;
  }
};

// Forward transform, unnormalized:
//   F(u, v) = sum_{h, w} x(h, w) exp(-2 pi i (u h / H + v w / W)).
// Rows and columns run as OpenMP-parallel loops. Returns the uncentered
// layout. Throws ValidationError for H or W below 2.
Spectrum dft2(const Image& img);

struct Reconstruction {
  Image image;            // real part, not clipped
  double max_imag = 0.0;  // largest |imaginary part| discarded
};

// Inverse of dft2 (with the 1 / (H W) factor). Accepts either layout.
Reconstruction idft2(const Spectrum& spectrum);

// Moves DC to the center and back. Idempotent with respect to the flag.
Spectrum center(Spectrum spectrum);
Spectrum uncenter(Spectrum spectrum);

// Binary low-frequency mask over the centered spectrum: ones on rows
// [H/2 - floor(alpha H), H/2 + floor(alpha H)] and columns likewise,
// inclusive and clipped to the image. alpha == 0 gives an empty mask.
struct FreqMask {
  double alpha = 0.0;
  int height = 0;
  int width = 0;
  int half_height = 0;
  int half_width = 0;
  std::vector<std::uint8_t> bits;  // row-major H x W

  bool contains(int h, int w) const {
    return bits[static_cast<std::size_t>(h) * width + w] != 0;
  }
  int count() const;
};

// Throws ValidationError unless 0 <= alpha < 1 and H, W >= 1.
FreqMask build_mask(double alpha, int height, int width);

// (1 - M) * src + M * tgt, elementwise on every channel of the centered
// amplitude spectra. Throws ValidationError on shape or layout mismatch.
std::vector<double> mix_amplitude(const Spectrum& src, const Spectrum& tgt,
                                  const FreqMask& mask);

struct AlignResult {
  Image aligned;    // clipped to [0, 1]
  Image unclipped;  // real part of the inverse transform
  Spectrum mixed;   // centered, source phase with mixed amplitude
  double max_imag = 0.0;
};

// Replaces the low-frequency amplitude of `src` with that of `tgt` while
// keeping the phase of `src`, then inverts.
AlignResult align_detailed(const Image& src, const Image& tgt, double alpha);
Image align(const Image& src, const Image& tgt, double alpha);

// log(1 + amplitude) over the low-frequency window of the centered
// spectrum, all channels concatenated.
std::vector<double> amplitude_features(const Image& img,
                                       double feature_alpha);

// Mean Euclidean distance between the amplitude features of every
// (a, b) pair with a in set_a and b in set_b. Symmetric in its arguments;
// zero iff every feature vector coincides.
double concentration(std::span<const Image> set_a,
                     std::span<const Image> set_b, double feature_alpha);

}  // namespace ccp

#endif  // CCP_DOMAIN_ALIGN_H_
