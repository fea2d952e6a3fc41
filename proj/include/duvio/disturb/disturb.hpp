#pragma once

#include <cstdint>

#include "duvio/core/image.hpp"

namespace duvio {

// Depth proxy for the haze model: constant, or a linear ramp from the top
// row (`near`) to the bottom row (`far`).
struct DepthProxy {
  enum class Kind { constant, vertical_gradient };
  Kind kind = Kind::constant;
  double near = 2.0;
  double far = 2.0;

  double at_row(std::size_t row, std::size_t height) const;
};

// Haze formation I = J*t + A*(1 - t), t = exp(-beta * d).
struct TurbidityParams {
  double attenuation_beta = 1.0;
  double airlight = 0.8;
  DepthProxy depth;

  // beta >= 0, airlight in [0,1], depths >= 0.
  TurbidityParams clamped() const;
};

// Radial polynomial warp, Gaussian blur, then additive Gaussian noise.
struct DistortionParams {
  double radial_k1 = 0.0;
  double radial_k2 = 0.0;
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  DistortionParams clamped() const;
};

Image apply_turbidity(const Image& image, const TurbidityParams& params);
Image apply_distortion(const Image& image, const DistortionParams& params);

Image gaussian_blur(const Image& image, double sigma);

}  // namespace duvio
