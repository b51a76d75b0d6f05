#include "ccp/domain_align.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ccp/errors.h"
#include "internal/dft2_kernel.h"

namespace ccp {
namespace internal {

void require_transformable(const Image& img, const char* what) {
  if (img.empty()) throw ValidationError(std::string(what) + ": empty image");
  if (img.height() < 2 || img.width() < 2) {
    throw ValidationError(std::string(what) +
                          ": image must be at least 2x2");
  }
  require_valid(img, /*unit_range=*/false, what);
}

void dft2_planes_parallel(std::vector<Complex>& data, int height, int width,
                          int channels, bool inverse) {
  const Dft1d rows(width);
  const Dft1d cols(height);
  const std::size_t plane = static_cast<std::size_t>(height) * width;
#pragma omp parallel
  {
    std::vector<Complex> line(std::max(height, width));
    std::vector<Complex> scratch(std::max(height, width));
#pragma omp for collapse(2) schedule(static)
    for (int c = 0; c < channels; ++c) {
      for (int h = 0; h < height; ++h) {
        std::span<Complex> row(data.data() + c * plane +
                                   static_cast<std::size_t>(h) * width,
                               width);
        rows.transform(row, inverse, scratch);
      }
    }
#pragma omp for collapse(2) schedule(static)
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
}

std::vector<Complex> to_complex(const Image& img) {
  std::vector<Complex> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img.data()[i];
  return out;
}

Spectrum to_spectrum(const std::vector<Complex>& data, int height, int width,
                     int channels) {
  Spectrum s;
  s.height = height;
  s.width = width;
  s.channels = channels;
  s.amplitude.resize(data.size());
  s.phase.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    s.amplitude[i] = std::abs(data[i]);
    double p = std::arg(data[i]);
    if (p <= -std::numbers::pi) p = std::numbers::pi;
    s.phase[i] = p;
  }
  return s;
}

std::vector<Complex> from_spectrum(const Spectrum& s) {
  std::vector<Complex> out(s.amplitude.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::polar(s.amplitude[i], s.phase[i]);
  }
  return out;
}

Reconstruction to_image(const std::vector<Complex>& data, int height,
                        int width, int channels) {
  Reconstruction r{Image(height, width, channels), 0.0};
  const double norm = 1.0 / (static_cast<double>(height) * width);
  for (std::size_t i = 0; i < data.size(); ++i) {
    r.image.data()[i] = data[i].real() * norm;
    r.max_imag = std::max(r.max_imag, std::abs(data[i].imag() * norm));
  }
  return r;
}

}  // namespace internal

namespace {

void require_spectrum_shape(const Spectrum& s, const char* what) {
  const std::size_t expected =
      s.plane_size() * static_cast<std::size_t>(s.channels);
  if (s.height < 1 || s.width < 1 || s.amplitude.size() != expected ||
      s.phase.size() != expected) {
    throw ValidationError(std::string(what) + ": inconsistent spectrum dims");
  }
}

// out[(i + offset) mod n] = in[i] along both axes, per channel.
Spectrum roll(Spectrum s, int row_offset, int col_offset) {
  Spectrum out = s;
  for (int c = 0; c < s.channels; ++c) {
    for (int h = 0; h < s.height; ++h) {
      const int hh = (h + row_offset) % s.height;
      for (int w = 0; w < s.width; ++w) {
        const int ww = (w + col_offset) % s.width;
        out.amplitude[out.index(hh, ww, c)] = s.amplitude[s.index(h, w, c)];
        out.phase[out.index(hh, ww, c)] = s.phase[s.index(h, w, c)];
      }
    }
  }
  return out;
}

// floor(alpha * n), tolerant of products that land a few ulps below an
// integer (0.29 * 100 == 28.999999999999996).
int half_extent(double alpha, int n) {
  return static_cast<int>(std::floor(alpha * n + 1e-9));
}

}  // namespace

Spectrum dft2(const Image& img) {
  internal::require_transformable(img, "dft2");
  std::vector<Complex> data = internal::to_complex(img);
  internal::dft2_planes_parallel(data, img.height(), img.width(),
                                 img.channels(), /*inverse=*/false);
  return internal::to_spectrum(data, img.height(), img.width(),
                               img.channels());
}

Reconstruction idft2(const Spectrum& spectrum) {
  require_spectrum_shape(spectrum, "idft2");
  const Spectrum flat = uncenter(spectrum);
  std::vector<Complex> data = internal::from_spectrum(flat);
  internal::dft2_planes_parallel(data, flat.height, flat.width, flat.channels,
                                 /*inverse=*/true);
  return internal::to_image(data, flat.height, flat.width, flat.channels);
}

Spectrum center(Spectrum spectrum) {
  if (spectrum.centered) return spectrum;
  const int h = spectrum.height;
  const int w = spectrum.width;
  Spectrum out = roll(std::move(spectrum), h / 2, w / 2);
  out.centered = true;
  return out;
}

Spectrum uncenter(Spectrum spectrum) {
  if (!spectrum.centered) return spectrum;
  const int h = spectrum.height;
  const int w = spectrum.width;
  Spectrum out = roll(std::move(spectrum), h - h / 2, w - w / 2);
  out.centered = false;
  return out;
}

int FreqMask::count() const {
  int n = 0;
  for (auto b : bits) n += b;
  return n;
}

FreqMask build_mask(double alpha, int height, int width) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ValidationError("build_mask: alpha must lie in [0, 1)");
  }
  if (height < 1 || width < 1) {
    throw ValidationError("build_mask: dimensions must be positive");
  }
  FreqMask m;
  m.alpha = alpha;
  m.height = height;
  m.width = width;
  m.bits.assign(static_cast<std::size_t>(height) * width, 0);
  if (alpha == 0.0) return m;
  m.half_height = half_extent(alpha, height);
  m.half_width = half_extent(alpha, width);
  const int ch = height / 2;
  const int cw = width / 2;
  const int h0 = std::max(0, ch - m.half_height);
  const int h1 = std::min(height - 1, ch + m.half_height);
  const int w0 = std::max(0, cw - m.half_width);
  const int w1 = std::min(width - 1, cw + m.half_width);
  for (int h = h0; h <= h1; ++h) {
    for (int w = w0; w <= w1; ++w) {
      m.bits[static_cast<std::size_t>(h) * width + w] = 1;
    }
  }
  return m;
}

std::vector<double> mix_amplitude(const Spectrum& src, const Spectrum& tgt,
                                  const FreqMask& mask) {
  require_spectrum_shape(src, "mix_amplitude");
  require_spectrum_shape(tgt, "mix_amplitude");
  if (src.height != tgt.height || src.width != tgt.width ||
      src.channels != tgt.channels) {
    throw ValidationError("mix_amplitude: source and target dims differ");
  }
  if (!src.centered || !tgt.centered) {
    throw ValidationError("mix_amplitude: spectra must be DC-centered");
  }
  if (mask.height != src.height || mask.width != src.width) {
    throw ValidationError("mix_amplitude: mask dims differ from spectra");
  }
  std::vector<double> out = src.amplitude;
  for (int c = 0; c < src.channels; ++c) {
    for (int h = 0; h < src.height; ++h) {
      for (int w = 0; w < src.width; ++w) {
        if (mask.contains(h, w)) {
          out[src.index(h, w, c)] = tgt.amplitude[tgt.index(h, w, c)];
        }
      }
    }
  }
  return out;
}

AlignResult align_detailed(const Image& src, const Image& tgt, double alpha) {
  require_same_shape(src, tgt, "align");
  const FreqMask mask = build_mask(alpha, src.height(), src.width());
  Spectrum source = center(dft2(src));
  const Spectrum target = center(dft2(tgt));
  source.amplitude = mix_amplitude(source, target, mask);

  Reconstruction r = idft2(source);
  AlignResult out;
  out.aligned = clamp_unit(r.image);
  out.unclipped = std::move(r.image);
  out.mixed = std::move(source);
  out.max_imag = r.max_imag;
  return out;
}

Image align(const Image& src, const Image& tgt, double alpha) {
  return align_detailed(src, tgt, alpha).aligned;
}

std::vector<double> amplitude_features(const Image& img,
                                       double feature_alpha) {
  if (!(feature_alpha > 0.0 && feature_alpha < 1.0)) {
    throw ValidationError("amplitude_features: alpha must lie in (0, 1)");
  }
  const Spectrum s = center(dft2(img));
  const FreqMask mask = build_mask(feature_alpha, s.height, s.width);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(mask.count()) * s.channels);
  for (int c = 0; c < s.channels; ++c) {
    for (int h = 0; h < s.height; ++h) {
      for (int w = 0; w < s.width; ++w) {
        if (mask.contains(h, w)) {
          out.push_back(std::log1p(s.amplitude[s.index(h, w, c)]));
        }
      }
    }
  }
  return out;
}

double concentration(std::span<const Image> set_a,
                     std::span<const Image> set_b, double feature_alpha) {
  if (set_a.empty() || set_b.empty()) {
    throw ValidationError("concentration: both image sets must be nonempty");
  }
  for (const Image& img : set_a) {
    require_same_shape(img, set_a.front(), "concentration");
  }
  for (const Image& img : set_b) {
    require_same_shape(img, set_a.front(), "concentration");
  }
  const auto na = static_cast<std::ptrdiff_t>(set_a.size());
  const auto nb = static_cast<std::ptrdiff_t>(set_b.size());
  std::vector<std::vector<double>> fa(na), fb(nb);
  // dft2 parallelizes internally; images here are computed one at a time.
  for (std::ptrdiff_t i = 0; i < na; ++i) {
    fa[i] = amplitude_features(set_a[i], feature_alpha);
  }
  for (std::ptrdiff_t i = 0; i < nb; ++i) {
    fb[i] = amplitude_features(set_b[i], feature_alpha);
  }
  double total = 0.0;
  for (std::ptrdiff_t i = 0; i < na; ++i) {
    for (std::ptrdiff_t j = 0; j < nb; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < fa[i].size(); ++k) {
        const double d = fa[i][k] - fb[j][k];
        sq += d * d;
      }
      total += std::sqrt(sq);
    }
  }
  return total / static_cast<double>(na * nb);
}

}  // namespace ccp
