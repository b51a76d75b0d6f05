#ifndef CCP_INTERNAL_SSIM_KERNEL_H_
#define CCP_INTERNAL_SSIM_KERNEL_H_

#include <vector>

#include "ccp/metrics.h"

namespace ccp::internal {

struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> v;
};

enum class Exec { kSerial, kParallel };

// MS-SSIM with the separable Gaussian filtering run serially or as
// OpenMP loops over output rows. Both produce bit-identical results.
MsSsimResult ms_ssim_impl(const Image& x, const Image& y, Exec exec);

}  // namespace ccp::internal

#endif  // CCP_INTERNAL_SSIM_KERNEL_H_
