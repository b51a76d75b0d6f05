#include "ccp/metrics.h"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "ccp/errors.h"
#include "internal/ssim_kernel.h"

namespace ccp {

double mean_squared_error(const Image& x, const Image& y) {
  require_same_shape(x, y, "mse");
  if (x.empty()) throw ValidationError("mse: empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data()[i] - y.data()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double psnr(const Image& x, const Image& y) {
  const double mse = mean_squared_error(x, y);
  if (mse == 0.0) return kIdenticalPsnr;
  return 10.0 * std::log10(1.0 / mse);
}

namespace internal {
namespace {

constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr std::array<double, kMsSsimMaxScales> kWeights = {
    0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

std::array<double, kMsSsimWindow> gaussian_taps() {
  std::array<double, kMsSsimWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kMsSsimWindow; ++i) {
    const double x = i - kMsSsimWindow / 2;
    g[i] = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Valid-mode separable filter: vertical pass, then horizontal.
Plane filter_valid(const Plane& in, Exec exec) {
  static const std::array<double, kMsSsimWindow> taps = gaussian_taps();
  const int oh = in.height - kMsSsimWindow + 1;
  const int ow = in.width - kMsSsimWindow + 1;
  Plane vert{oh, in.width, std::vector<double>(
                               static_cast<std::size_t>(oh) * in.width)};
  Plane out{oh, ow, std::vector<double>(static_cast<std::size_t>(oh) * ow)};
  const bool parallel = exec == Exec::kParallel;
#pragma omp parallel if (parallel)
  {
#pragma omp for schedule(static)
    for (int h = 0; h < oh; ++h) {
      for (int w = 0; w < in.width; ++w) {
        double acc = 0.0;
        for (int k = 0; k < kMsSsimWindow; ++k) {
          acc += taps[k] * in.v[static_cast<std::size_t>(h + k) * in.width + w];
        }
        vert.v[static_cast<std::size_t>(h) * in.width + w] = acc;
      }
    }
#pragma omp for schedule(static)
    for (int h = 0; h < oh; ++h) {
      for (int w = 0; w < ow; ++w) {
        double acc = 0.0;
        for (int k = 0; k < kMsSsimWindow; ++k) {
          acc += taps[k] * vert.v[static_cast<std::size_t>(h) * in.width + w + k];
        }
        out.v[static_cast<std::size_t>(h) * ow + w] = acc;
      }
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out{a.height, a.width, std::vector<double>(a.v.size())};
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

struct ScaleScores {
  double ssim = 0.0;
  double cs = 0.0;
};

ScaleScores ssim_scale(const Plane& x, const Plane& y, Exec exec) {
  const double c1 = kK1 * kK1;
  const double c2 = kK2 * kK2;
  const Plane mu_x = filter_valid(x, exec);
  const Plane mu_y = filter_valid(y, exec);
  const Plane xx = filter_valid(product(x, x), exec);
  const Plane yy = filter_valid(product(y, y), exec);
  const Plane xy = filter_valid(product(x, y), exec);
  double ssim_sum = 0.0, cs_sum = 0.0;
  for (std::size_t i = 0; i < mu_x.v.size(); ++i) {
    const double mx = mu_x.v[i];
    const double my = mu_y.v[i];
    const double var_x = xx.v[i] - mx * mx;
    const double var_y = yy.v[i] - my * my;
    const double cov = xy.v[i] - mx * my;
    const double cs = (2.0 * cov + c2) / (var_x + var_y + c2);
    const double lum = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
    cs_sum += cs;
    ssim_sum += lum * cs;
  }
  const double n = static_cast<double>(mu_x.v.size());
  return {ssim_sum / n, cs_sum / n};
}

// 2x2 average pool; odd sizes get one zero row/column of padding on each
// side, and padded zeros count toward the mean.
Plane downsample(const Plane& in) {
  const int ph = in.height % 2;
  const int pw = in.width % 2;
  const int oh = (in.height + 2 * ph - 2) / 2 + 1;
  const int ow = (in.width + 2 * pw - 2) / 2 + 1;
  Plane out{oh, ow, std::vector<double>(static_cast<std::size_t>(oh) * ow)};
  for (int h = 0; h < oh; ++h) {
    for (int w = 0; w < ow; ++w) {
      double acc = 0.0;
      for (int dh = 0; dh < 2; ++dh) {
        for (int dw = 0; dw < 2; ++dw) {
          const int sh = 2 * h + dh - ph;
          const int sw = 2 * w + dw - pw;
          if (sh >= 0 && sh < in.height && sw >= 0 && sw < in.width) {
            acc += in.v[static_cast<std::size_t>(sh) * in.width + sw];
          }
        }
      }
      out.v[static_cast<std::size_t>(h) * ow + w] = acc / 4.0;
    }
  }
  return out;
}

}  // namespace

MsSsimResult ms_ssim_impl(const Image& x, const Image& y, Exec exec) {
  require_same_shape(x, y, "ms_ssim");
  if (x.empty()) throw ValidationError("ms_ssim: empty image");
  const int min_side = std::min(x.height(), x.width());
  int scales = 0;
  while (scales < kMsSsimMaxScales &&
         min_side >= kMsSsimWindow * (1 << scales)) {
    ++scales;
  }
  if (scales == 0) {
    throw ValidationError("ms_ssim: images need min(H, W) >= " +
                          std::to_string(kMsSsimWindow));
  }
  double weight_sum = 0.0;
  for (int s = 0; s < scales; ++s) weight_sum += kWeights[s];

  double total = 0.0;
  for (int c = 0; c < x.channels(); ++c) {
    Plane px{x.height(), x.width(),
             std::vector<double>(x.plane(c).begin(), x.plane(c).end())};
    Plane py{y.height(), y.width(),
             std::vector<double>(y.plane(c).begin(), y.plane(c).end())};
    double value = 1.0;
    for (int s = 0; s < scales; ++s) {
      const ScaleScores sc = ssim_scale(px, py, exec);
      const double w = kWeights[s] / weight_sum;
      if (s + 1 < scales) {
        value *= std::pow(std::max(sc.cs, 0.0), w);
        px = downsample(px);
        py = downsample(py);
      } else {
        value *= std::pow(std::max(sc.ssim, 0.0), w);
      }
    }
    total += value;
  }
  return {total / x.channels(), scales};
}

}  // namespace internal

MsSsimResult ms_ssim(const Image& x, const Image& y) {
  return internal::ms_ssim_impl(x, y, internal::Exec::kParallel);
}

IouResult iou(const LabelMap& pred, const LabelMap& truth, int num_classes) {
  if (num_classes < 1) throw ValidationError("iou: num_classes must be >= 1");
  if (pred.height != truth.height || pred.width != truth.width ||
      pred.labels.size() != truth.labels.size() ||
      pred.labels.size() !=
          static_cast<std::size_t>(pred.height) * pred.width) {
    throw ValidationError("iou: label maps differ in shape");
  }
  std::vector<long> inter(num_classes, 0), uni(num_classes, 0);
  for (std::size_t i = 0; i < pred.labels.size(); ++i) {
    const int p = pred.labels[i];
    const int t = truth.labels[i];
    if (p < 0 || p >= num_classes || t < 0 || t >= num_classes) {
      throw ValidationError("iou: label out of range at pixel " +
                            std::to_string(i));
    }
    if (p == t) {
      ++inter[p];
      ++uni[p];
    } else {
      ++uni[p];
      ++uni[t];
    }
  }
  IouResult r;
  r.per_class.resize(num_classes);
  double sum = 0.0;
  int present = 0;
  for (int k = 0; k < num_classes; ++k) {
    if (uni[k] == 0) continue;
    r.per_class[k] = static_cast<double>(inter[k]) / uni[k];
    sum += *r.per_class[k];
    ++present;
  }
  r.mean_iou = present ? sum / present : 0.0;
  return r;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_report_csv(std::ostream& out, const QualityReport& r) {
  out << kReportCsvHeader << '\n'
      << format_double(r.psnr_db) << ',' << format_double(r.ms_ssim) << ','
      << format_double(r.mse) << ',' << format_double(r.bitrate_bpp) << ','
      << (r.mean_iou ? format_double(*r.mean_iou) : std::string()) << ','
      << format_double(r.avg_delay_s) << '\n';
}

}  // namespace ccp
