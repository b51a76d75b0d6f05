#ifndef CCP_SERIAL_REFERENCE_H_
#define CCP_SERIAL_REFERENCE_H_

// Single-threaded counterparts of the OpenMP kernels. They follow the same
// per-element arithmetic, so results match the parallel versions bit for
// bit; tests compare against them and the benchmark times both.

#include "ccp/comm_graph_opt.h"
#include "ccp/domain_align.h"
#include "ccp/metrics.h"
#include "ccp/rd_codec.h"

namespace ccp::serial {

Spectrum dft2(const Image& img);
Reconstruction idft2(const Spectrum& spectrum);

EncodedFrame encode(const Image& img, const CodecConfig& cfg,
                    const EntropyModel& model);
Image decode(const EncodedFrame& frame);

CommPlan brute_force_optimum(const Scenario& s);

MsSsimResult ms_ssim(const Image& x, const Image& y);

}  // namespace ccp::serial

#endif  // CCP_SERIAL_REFERENCE_H_
