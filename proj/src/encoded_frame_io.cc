#include "ccp/encoded_frame_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ccp/errors.h"

namespace ccp {
namespace {

constexpr char kMagic[4] = {'C', 'C', 'P', 'F'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<
      std::conditional_t<std::is_floating_point_v<T>,
                         std::conditional_t<sizeof(T) == 8, std::int64_t,
                                            std::int32_t>,
                         T>>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t offset) {
  using U = std::make_unsigned_t<
      std::conditional_t<std::is_floating_point_v<T>,
                         std::conditional_t<sizeof(T) == 8, std::int64_t,
                                            std::int32_t>,
                         T>>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<U>(static_cast<U>(in[offset + i]) << (8 * i));
  }
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> serialize_frame(const EncodedFrame& f) {
  if (f.channels < 1 || f.channels > 255 || f.block_size < 1 ||
      f.block_size > 255 || f.height < 1 || f.width < 1) {
    throw IoError("serialize_frame: header fields out of range");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + 2 * f.coefficients.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put<std::uint16_t>(out, kFrameFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.channels));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.block_size));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.height));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.width));
  put<double>(out, f.quant_step);
  put<std::uint64_t>(out, f.model_id);
  put<double>(out, f.bit_count);
  put<std::uint64_t>(out, f.coefficients.size());
  for (std::int16_t c : f.coefficients) put<std::int16_t>(out, c);
  return out;
}

EncodedFrame deserialize_frame(const std::vector<std::uint8_t>& in) {
  if (in.size() < kFrameHeaderBytes ||
      std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IoError("frame: bad magic or short header");
  }
  const auto version = get<std::uint16_t>(in, 4);
  if (version != kFrameFormatVersion) {
    throw IoError("frame: unsupported version " + std::to_string(version));
  }
  EncodedFrame f;
  f.channels = get<std::uint8_t>(in, 6);
  f.block_size = get<std::uint8_t>(in, 7);
  f.height = static_cast<int>(get<std::uint32_t>(in, 8));
  f.width = static_cast<int>(get<std::uint32_t>(in, 12));
  f.quant_step = get<double>(in, 16);
  f.model_id = get<std::uint64_t>(in, 24);
  f.bit_count = get<double>(in, 32);
  const auto count = get<std::uint64_t>(in, 40);
  if ((in.size() - kFrameHeaderBytes) / 2 < count) {
    throw IoError("frame: truncated coefficient payload");
  }
  f.coefficients.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    f.coefficients[i] = get<std::int16_t>(in, kFrameHeaderBytes + 2 * i);
  }
  return f;
}

void save_frame(const std::string& path, const EncodedFrame& frame) {
  const std::vector<std::uint8_t> bytes = serialize_frame(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

EncodedFrame load_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_frame(bytes);
}

}  // namespace ccp
