#include "duvio/disturb/disturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace duvio {

double DepthProxy::at_row(std::size_t row, std::size_t height) const {
  if (kind == Kind::constant || height < 2) return near;
  const double s = static_cast<double>(row) / static_cast<double>(height - 1);
  return near + s * (far - near);
}

TurbidityParams TurbidityParams::clamped() const {
  TurbidityParams p = *this;
  if (!(p.attenuation_beta >= 0.0)) p.attenuation_beta = 0.0;
  p.airlight = std::clamp(p.airlight, 0.0, 1.0);
  p.depth.near = std::max(0.0, p.depth.near);
  p.depth.far = std::max(0.0, p.depth.far);
  return p;
}

DistortionParams DistortionParams::clamped() const {
  DistortionParams p = *this;
  p.blur_sigma = std::max(0.0, p.blur_sigma);
  p.noise_sigma = std::max(0.0, p.noise_sigma);
  return p;
}

Image apply_turbidity(const Image& image, const TurbidityParams& raw) {
  const TurbidityParams p = raw.clamped();
  Image out = image;
  for (std::size_t y = 0; y < image.height(); ++y) {
    const double d = p.depth.at_row(y, image.height());
    // 0 * inf would be NaN; zero depth means no attenuation at any beta.
    const double t = (d == 0.0 || p.attenuation_beta == 0.0)
                         ? 1.0
                         : std::exp(-p.attenuation_beta * d);
    for (std::size_t x = 0; x < image.width(); ++x) {
      out.at(x, y) = std::clamp(image.at(x, y) * t + p.airlight * (1.0 - t), 0.0, 1.0);
    }
  }
  return out;
}

Image gaussian_blur(const Image& image, double sigma) {
  if (sigma <= 0.0 || image.empty()) return image;
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;
  const auto w = static_cast<std::ptrdiff_t>(image.width());
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  Image tmp(image.width(), image.height());
  Image out(image.width(), image.height());
  for (std::ptrdiff_t y = 0; y < h; ++y)
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const auto xx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(x + i, 0, w - 1));
        acc += kernel[static_cast<std::size_t>(i + radius)] * image.at(xx, static_cast<std::size_t>(y));
      }
      tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  for (std::ptrdiff_t y = 0; y < h; ++y)
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const auto yy = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(y + i, 0, h - 1));
        acc += kernel[static_cast<std::size_t>(i + radius)] * tmp.at(static_cast<std::size_t>(x), yy);
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  return out;
}

namespace {

double sample_bilinear(const Image& img, double fx, double fy) {
  fx = std::clamp(fx, 0.0, static_cast<double>(img.width() - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(img.height() - 1));
  const auto x0 = static_cast<std::size_t>(fx);
  const auto y0 = static_cast<std::size_t>(fy);
  const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
  const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
  const double wx = fx - static_cast<double>(x0);
  const double wy = fy - static_cast<double>(y0);
  return (1 - wy) * ((1 - wx) * img.at(x0, y0) + wx * img.at(x1, y0)) +
         wy * ((1 - wx) * img.at(x0, y1) + wx * img.at(x1, y1));
}

Image radial_warp(const Image& image, double k1, double k2) {
  if ((k1 == 0.0 && k2 == 0.0) || image.empty()) return image;
  const double cx = 0.5 * static_cast<double>(image.width() - 1);
  const double cy = 0.5 * static_cast<double>(image.height() - 1);
  const double norm = std::max(std::hypot(cx, cy), 1.0);
  Image out(image.width(), image.height());
  for (std::size_t y = 0; y < image.height(); ++y)
    for (std::size_t x = 0; x < image.width(); ++x) {
      const double dx = (static_cast<double>(x) - cx) / norm;
      const double dy = (static_cast<double>(y) - cy) / norm;
      const double r2 = dx * dx + dy * dy;
      const double f = 1.0 + k1 * r2 + k2 * r2 * r2;
      out.at(x, y) = sample_bilinear(image, cx + dx * f * norm, cy + dy * f * norm);
    }
  return out;
}

}  // namespace

Image apply_distortion(const Image& image, const DistortionParams& raw) {
  const DistortionParams p = raw.clamped();
  Image out = radial_warp(image, p.radial_k1, p.radial_k2);
  out = gaussian_blur(out, p.blur_sigma);
  if (p.noise_sigma > 0.0) {
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> noise(0.0, p.noise_sigma);
    for (double& v : out.pixels()) v += noise(rng);
  }
  return clamp01(std::move(out));
}

}  // namespace duvio
