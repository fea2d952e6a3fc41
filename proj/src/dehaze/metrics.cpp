#include "duvio/dehaze/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

namespace {

constexpr double kPeak = 255.0;
constexpr int kRadius = 5;
constexpr double kSigma = 1.5;

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b) || a.empty()) {
    throw ShapeError(fmt::format("{}: reference is {}x{}, candidate is {}x{}", what, a.width(),
                                 a.height(), b.width(), b.height()));
  }
}

std::array<double, 2 * kRadius + 1> gaussian_taps() {
  std::array<double, 2 * kRadius + 1> taps{};
  for (int i = -kRadius; i <= kRadius; ++i)
    taps[i + kRadius] = std::exp(-0.5 * i * i / (kSigma * kSigma));
  return taps;
}

// Normalised separable Gaussian filter with truncated border windows.
std::vector<double> local_mean(const std::vector<double>& src, std::size_t w, std::size_t h) {
  static const auto taps = gaussian_taps();
  std::vector<double> tmp(src.size()), out(src.size());
  const auto iw = static_cast<long>(w), ih = static_cast<long>(h);
  for (long y = 0; y < ih; ++y)
    for (long x = 0; x < iw; ++x) {
      double acc = 0.0, norm = 0.0;
      for (int k = -kRadius; k <= kRadius; ++k) {
        const long xx = x + k;
        if (xx < 0 || xx >= iw) continue;
        acc += taps[k + kRadius] * src[y * iw + xx];
        norm += taps[k + kRadius];
      }
      tmp[y * iw + x] = acc / norm;
    }
  for (long y = 0; y < ih; ++y)
    for (long x = 0; x < iw; ++x) {
      double acc = 0.0, norm = 0.0;
      for (int k = -kRadius; k <= kRadius; ++k) {
        const long yy = y + k;
        if (yy < 0 || yy >= ih) continue;
        acc += taps[k + kRadius] * tmp[yy * iw + x];
        norm += taps[k + kRadius];
      }
      out[y * iw + x] = acc / norm;
    }
  return out;
}

}  // namespace

double mse_8bit(const Image& reference, const Image& candidate) {
  require_same_shape(reference, candidate, "mse");
  double acc = 0.0;
  const auto a = reference.pixels();
  const auto b = candidate.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = kPeak * (a[i] - b[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / mse);
}

double ssim(const Image& reference, const Image& candidate) {
  require_same_shape(reference, candidate, "ssim");
  const std::size_t w = reference.width(), h = reference.height(), n = reference.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = kPeak * reference.pixels()[i];
    y[i] = kPeak * candidate.pixels()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = local_mean(x, w, h), my = local_mean(y, w, h);
  const auto mxx = local_mean(xx, w, h), myy = local_mean(yy, w, h), mxy = local_mean(xy, w, h);
  const double c1 = (0.01 * kPeak) * (0.01 * kPeak);
  const double c2 = (0.03 * kPeak) * (0.03 * kPeak);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cxy = mxy[i] - mx[i] * my[i];
    acc += ((2 * mx[i] * my[i] + c1) * (2 * cxy + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(n);
}

ImageQualityReport image_metrics(const Image& reference, const Image& candidate) {
  ImageQualityReport r;
  r.mse = mse_8bit(reference, candidate);
  r.rmse = std::sqrt(r.mse);
  r.psnr = psnr_from_mse(r.mse);
  r.ssim = reference == candidate ? 1.0 : ssim(reference, candidate);
  return r;
}

}  // namespace duvio
