#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace duvio {

// Monochrome raster, row-major, intensities nominally in [0,1].
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), pixels_(width * height, fill) {}
  Image(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::span<double> pixels() { return pixels_; }
  std::span<const double> pixels() const { return pixels_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool operator==(const Image& other) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

// Bilinear resample (pixel-center aligned, edge clamped).
Image resize_bilinear(const Image& src, std::size_t width, std::size_t height);

// Snap every value to the nearest k/255 after clamping to [0,1].
Image quantize_8bit(const Image& src);

Image clamp01(Image img);

double mean(const Image& img);
double stddev(const Image& img);

}  // namespace duvio
