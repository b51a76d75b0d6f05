#ifndef CCP_INTERNAL_DFT2_KERNEL_H_
#define CCP_INTERNAL_DFT2_KERNEL_H_

#include <vector>

#include "ccp/domain_align.h"
#include "ccp/fft.h"

namespace ccp::internal {

// In-place 2-D transform of `channels` planes of height x width complex
// samples (rows first, then columns). Unnormalized in both directions.
void dft2_planes_parallel(std::vector<Complex>& data, int height, int width,
                          int channels, bool inverse);
void dft2_planes_serial(std::vector<Complex>& data, int height, int width,
                        int channels, bool inverse);

std::vector<Complex> to_complex(const Image& img);
Spectrum to_spectrum(const std::vector<Complex>& data, int height, int width,
                     int channels);
std::vector<Complex> from_spectrum(const Spectrum& uncentered);
Reconstruction to_image(const std::vector<Complex>& data, int height,
                        int width, int channels);

void require_transformable(const Image& img, const char* what);

}  // namespace ccp::internal

#endif  // CCP_INTERNAL_DFT2_KERNEL_H_
