#ifndef CCP_IMAGE_H_
#define CCP_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ccp {

// H x W x C image with 64-bit float samples, nominally in [0, 1].
// Storage is planar: all of channel 0, then channel 1, ...; each plane is
// row-major.
class Image {
 public:
  Image() = default;
  // Throws ValidationError unless H, W >= 1 and C is 1 or 3.
  Image(int height, int width, int channels, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int h, int w, int c) {
    return data_[c * plane_size() + static_cast<std::size_t>(h) * width_ + w];
  }
  double at(int h, int w, int c) const {
    return data_[c * plane_size() + static_cast<std::size_t>(h) * width_ + w];
  }

  std::span<double> plane(int c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Throws ValidationError if the shapes differ; `what` names the operation.
void require_same_shape(const Image& a, const Image& b, const char* what);

// Throws ValidationError on NaN/inf or, when `unit_range`, values outside
// [0, 1].
void require_valid(const Image& img, bool unit_range, const char* what);

// Elementwise clamp to [0, 1].
Image clamp_unit(Image img);

double mean_value(const Image& img);

// Root mean square of a - b over all samples.
double rms_difference(const Image& a, const Image& b);

// Deterministic procedural test scene: smooth gradients, a few discs and a
// stripe texture, offset by a per-scene brightness and color cast. Values are
// snapped to 8-bit levels so they survive PPM/PGM round trips exactly.
struct SceneParams {
  int height = 64;
  int width = 64;
  int channels = 3;
  std::uint64_t seed = 0;
  double brightness = 0.0;  // added to every sample before clamping
  double color_cast[3] = {0.0, 0.0, 0.0};
  double shift_x = 0.0;  // horizontal translation of the pattern, pixels
  double noise = 0.0;    // amplitude of seeded uniform noise
};
Image synthesize_scene(const SceneParams& params);

}  // namespace ccp

#endif  // CCP_IMAGE_H_
