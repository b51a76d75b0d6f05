#ifndef CCP_ENCODED_FRAME_IO_H_
#define CCP_ENCODED_FRAME_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccp/rd_codec.h"

namespace ccp {

// Version 1 container, all fields little-endian:
//
//   offset  size  field
//   0       4     magic "CCPF"
//   4       2     version (uint16) = 1
//   6       1     channels (uint8)
//   7       1     block_size (uint8)
//   8       4     height (uint32)
//   12      4     width (uint32)
//   16      8     quant_step (IEEE-754 binary64)
//   24      8     model_id (uint64)
//   32      8     bit_count (IEEE-754 binary64)
//   40      8     coefficient count (uint64)
//   48      2*n   coefficients (int16), order as in EncodedFrame
inline constexpr std::uint16_t kFrameFormatVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 48;

std::vector<std::uint8_t> serialize_frame(const EncodedFrame& frame);
// Throws IoError on a bad magic, unknown version or truncated payload.
EncodedFrame deserialize_frame(const std::vector<std::uint8_t>& bytes);

void save_frame(const std::string& path, const EncodedFrame& frame);
EncodedFrame load_frame(const std::string& path);

}  // namespace ccp

#endif  // CCP_ENCODED_FRAME_IO_H_
