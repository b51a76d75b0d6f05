#ifndef CCP_IMAGE_IO_H_
#define CCP_IMAGE_IO_H_

#include <string>

#include "ccp/image.h"

namespace ccp {

// Binary PGM (P5, 1 channel) and PPM (P6, 3 channels) with maxval 255.
// Samples map to v / 255 on read and round(clamp(x) * 255) on write, so an
// 8-bit file survives a read/write cycle byte for byte. Header comments
// ('#' to end of line) are accepted. Errors throw IoError.
Image read_pnm(const std::string& path);
void write_pnm(const std::string& path, const Image& img);

Image parse_pnm(const std::string& bytes);
std::string format_pnm(const Image& img);

}  // namespace ccp

#endif  // CCP_IMAGE_IO_H_
