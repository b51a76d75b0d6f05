#ifndef CCP_INTERNAL_BLOCK_TRANSFORM_H_
#define CCP_INTERNAL_BLOCK_TRANSFORM_H_

#include <cstdint>
#include <vector>

#include "ccp/image.h"
#include "ccp/rd_codec.h"

namespace ccp::internal {

struct BlockLayout {
  int block_size = 8;
  int channels = 1;
  int padded_height = 0;
  int padded_width = 0;
  int blocks_y = 0;
  int blocks_x = 0;

  std::size_t block_area() const {
    return static_cast<std::size_t>(block_size) * block_size;
  }
  std::size_t block_offset(int c, int by, int bx) const {
    return ((static_cast<std::size_t>(c) * blocks_y + by) * blocks_x + bx) *
           block_area();
  }
  std::size_t num_blocks() const {
    return static_cast<std::size_t>(channels) * blocks_y * blocks_x;
  }
};

BlockLayout layout_for(int height, int width, int channels, int block_size);

// Orthonormal DCT-II basis, row k = frequency: basis[k * n + i].
std::vector<double> dct_basis(int n);

// Code values (x * 255 - 128), edge-padded to the block grid, planar.
std::vector<double> padded_code_values(const Image& img,
                                       const BlockLayout& layout);

// Quantized coefficients of one block. `tmp` holds block_area() doubles.
// Returns false if any coefficient overflows int16.
bool quantize_block(const std::vector<double>& code_values,
                    const BlockLayout& layout, int c, int by, int bx,
                    const std::vector<double>& basis, double quant_step,
                    std::int16_t* out, double* tmp);

// Dequantizes and inverse-transforms one block into `pixels` (padded
// planar code values).
void reconstruct_block(const std::int16_t* coeffs, const BlockLayout& layout,
                       int c, int by, int bx, const std::vector<double>& basis,
                       double quant_step, std::vector<double>& pixels,
                       double* tmp);

// Crops padded code values back to a [0, 1] image of the source dims.
Image code_values_to_image(const std::vector<double>& pixels,
                           const BlockLayout& layout, int height, int width);

}  // namespace ccp::internal

#endif  // CCP_INTERNAL_BLOCK_TRANSFORM_H_
