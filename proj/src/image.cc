#include "ccp/image.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ccp/errors.h"

namespace ccp {

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1) {
    throw ValidationError("image dimensions must be positive, got " +
                          std::to_string(height) + "x" +
                          std::to_string(width));
  }
  if (channels != 1 && channels != 3) {
    throw ValidationError("image channel count must be 1 or 3, got " +
                          std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ValidationError(
        std::string(what) + ": shape mismatch " + std::to_string(a.height()) +
        "x" + std::to_string(a.width()) + "x" + std::to_string(a.channels()) +
        " vs " + std::to_string(b.height()) + "x" + std::to_string(b.width()) +
        "x" + std::to_string(b.channels()));
  }
}

void require_valid(const Image& img, bool unit_range, const char* what) {
  if (img.empty()) {
    throw ValidationError(std::string(what) + ": empty image");
  }
  for (double v : img.data()) {
    if (!std::isfinite(v)) {
      throw ValidationError(std::string(what) + ": non-finite sample");
    }
    if (unit_range && (v < 0.0 || v > 1.0)) {
      throw ValidationError(std::string(what) + ": sample " +
                            std::to_string(v) + " outside [0, 1]");
    }
  }
}

Image clamp_unit(Image img) {
  for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

double mean_value(const Image& img) {
  double sum = 0.0;
  for (double v : img.data()) sum += v;
  return img.empty() ? 0.0 : sum / static_cast<double>(img.size());
}

double rms_difference(const Image& a, const Image& b) {
  require_same_shape(a, b, "rms_difference");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

Image synthesize_scene(const SceneParams& p) {
  Image img(p.height, p.width, p.channels);
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Disc {
    double cx, cy, r, level;
  };
  std::vector<Disc> discs(4);
  for (auto& d : discs) {
    d.cx = unit(rng) * p.width;
    d.cy = unit(rng) * p.height;
    d.r = (0.08 + 0.15 * unit(rng)) * std::min(p.height, p.width);
    d.level = 0.15 + 0.3 * unit(rng);
  }
  const double stripe_period = 6.0 + 6.0 * unit(rng);
  const double tint[3] = {0.9 + 0.1 * unit(rng), 0.9 + 0.1 * unit(rng),
                          0.9 + 0.1 * unit(rng)};

  for (int c = 0; c < p.channels; ++c) {
    for (int h = 0; h < p.height; ++h) {
      for (int w = 0; w < p.width; ++w) {
        const double x = w - p.shift_x;
        double v = 0.25 + 0.3 * (h + 0.5) / p.height +
                   0.1 * (x + 0.5) / p.width;
        for (const auto& d : discs) {
          const double dx = x - d.cx;
          const double dy = h - d.cy;
          if (dx * dx + dy * dy <= d.r * d.r) v += d.level;
        }
        if (h > p.height / 2) {
          v += 0.06 * std::sin(2.0 * std::numbers::pi * x / stripe_period);
        }
        v *= tint[c];
        v += p.brightness + p.color_cast[c];
        if (p.noise > 0.0) v += p.noise * (2.0 * unit(rng) - 1.0);
        v = std::clamp(v, 0.0, 1.0);
        img.at(h, w, c) = std::round(v * 255.0) / 255.0;
      }
    }
  }
  return img;
}

}  // namespace ccp
