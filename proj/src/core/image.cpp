#include "duvio/core/image.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

Image::Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw ShapeError(fmt::format("image {}x{} given {} pixels", width_, height_, pixels_.size()));
  }
}

Image resize_bilinear(const Image& src, std::size_t width, std::size_t height) {
  if (src.width() == width && src.height() == height) return src;
  if (src.empty()) throw ShapeError("cannot resize an empty image");
  Image out(width, height);
  const double sx = static_cast<double>(src.width()) / static_cast<double>(width);
  const double sy = static_cast<double>(src.height()) / static_cast<double>(height);
  const auto max_x = static_cast<double>(src.width() - 1);
  const auto max_y = static_cast<double>(src.height() - 1);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, src.height() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, src.width() - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1 - wx) * src.at(x0, y0) + wx * src.at(x1, y0);
      const double bot = (1 - wx) * src.at(x0, y1) + wx * src.at(x1, y1);
      out.at(x, y) = (1 - wy) * top + wy * bot;
    }
  }
  return out;
}

Image quantize_8bit(const Image& src) {
  Image out = src;
  for (double& v : out.pixels()) v = std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
  return out;
}

Image clamp01(Image img) {
  for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

double mean(const Image& img) {
  double s = 0.0;
  for (double v : img.pixels()) s += v;
  return img.empty() ? 0.0 : s / static_cast<double>(img.size());
}

double stddev(const Image& img) {
  if (img.empty()) return 0.0;
  const double m = mean(img);
  double s = 0.0;
  for (double v : img.pixels()) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(img.size()));
}

}  // namespace duvio
