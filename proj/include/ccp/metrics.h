#ifndef CCP_METRICS_H_
#define CCP_METRICS_H_

#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccp/image.h"

namespace ccp {

double mean_squared_error(const Image& x, const Image& y);

// 10 log10(1 / MSE) for unit-range images. Identical images give
// +infinity, reported as kIdenticalPsnr.
inline constexpr double kIdenticalPsnr =
    std::numeric_limits<double>::infinity();
double psnr(const Image& x, const Image& y);

// Multi-scale SSIM: Gaussian window of 11 taps (sigma 1.5), K1 = 0.01,
// K2 = 0.03, data range 1, scale weights
// {0.0448, 0.2856, 0.3001, 0.2363, 0.1333}. Each scale halves the image
// with 2x2 average pooling (zero padding on odd sizes, counted in the
// mean). Five scales need min(H, W) >= 176; smaller images use the largest
// scale count that fits, with the leading weights renormalized. Per-channel
// scores are averaged.
struct MsSsimResult {
  double value = 0.0;
  int scales = 0;
};
inline constexpr int kMsSsimWindow = 11;
inline constexpr int kMsSsimMaxScales = 5;
MsSsimResult ms_ssim(const Image& x, const Image& y);

// Integer class map, row-major.
struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<int> labels;
};

struct IouResult {
  // nullopt for classes absent from both maps; those are left out of the
  // mean.
  std::vector<std::optional<double>> per_class;
  double mean_iou = 0.0;
};

// Throws ValidationError on shape mismatch or labels outside
// [0, num_classes).
IouResult iou(const LabelMap& pred, const LabelMap& truth, int num_classes);

struct QualityReport {
  double psnr_db = 0.0;
  double ms_ssim = 0.0;
  double mse = 0.0;
  double bitrate_bpp = 0.0;
  std::vector<std::optional<double>> iou_per_class;
  std::optional<double> mean_iou;
  double avg_delay_s = 0.0;
};

// CSV with header
//   psnr_db,ms_ssim,mse,bitrate_bpp,mean_iou,avg_delay_s
// Doubles use 17 significant digits; absent IoU is an empty field and an
// infinite PSNR is written as "inf".
void write_report_csv(std::ostream& out, const QualityReport& report);
inline constexpr const char* kReportCsvHeader =
    "psnr_db,ms_ssim,mse,bitrate_bpp,mean_iou,avg_delay_s";

// Shortest round-trippable formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace ccp

#endif  // CCP_METRICS_H_
