#include "ccp/image_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccp/errors.h"

namespace ccp {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (start == pos_ || pos_ - start > 9) {
      throw IoError("pnm: malformed header integer");
    }
    return std::stoi(bytes_.substr(start, pos_ - start));
  }

  // Exactly one whitespace byte separates the header from the raster.
  void end_header() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw IoError("pnm: missing whitespace after header");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image parse_pnm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw IoError("pnm: expected P5 or P6 magic");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader header(bytes);
  const int width = header.read_int();
  const int height = header.read_int();
  const int maxval = header.read_int();
  header.end_header();
  if (width < 1 || height < 1) throw IoError("pnm: bad dimensions");
  if (maxval != 255) throw IoError("pnm: only maxval 255 is supported");
  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - header.pos() < count) {
    throw IoError("pnm: truncated raster");
  }
  Image img(height, width, channels);
  const auto* raster =
      reinterpret_cast<const unsigned char*>(bytes.data() + header.pos());
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      for (int c = 0; c < channels; ++c) {
        img.at(h, w, c) =
            raster[(static_cast<std::size_t>(h) * width + w) * channels + c] /
            255.0;
      }
    }
  }
  return img;
}

std::string format_pnm(const Image& img) {
  if (img.empty()) throw IoError("pnm: empty image");
  std::ostringstream out;
  out << (img.channels() == 1 ? "P5" : "P6") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  std::string raster(img.size(), '\0');
  for (int h = 0; h < img.height(); ++h) {
    for (int w = 0; w < img.width(); ++w) {
      for (int c = 0; c < img.channels(); ++c) {
        const double v = std::clamp(img.at(h, w, c), 0.0, 1.0);
        raster[(static_cast<std::size_t>(h) * img.width() + w) *
                   img.channels() +
               c] = static_cast<char>(
            static_cast<unsigned char>(std::lround(v * 255.0)));
      }
    }
  }
  return out.str() + raster;
}

Image read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pnm(buf.str());
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_pnm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::string bytes = format_pnm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace ccp
