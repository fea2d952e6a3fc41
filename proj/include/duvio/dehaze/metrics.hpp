#pragma once

#include "duvio/core/image.hpp"

namespace duvio {

// Full-reference quality of `candidate` against `reference`. MSE, RMSE and
// PSNR use the 0-255 intensity scale. PSNR is +infinity for identical images.
struct ImageQualityReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
};

inline constexpr double kPsnrTextCap = 99.0;

ImageQualityReport image_metrics(const Image& reference, const Image& candidate);

double mse_8bit(const Image& reference, const Image& candidate);
double psnr_from_mse(double mse);
// Gaussian-window SSIM (11x11, sigma 1.5, K1=0.01, K2=0.03, L=255). Windows
// are truncated at the border and renormalised.
double ssim(const Image& reference, const Image& candidate);

}  // namespace duvio
