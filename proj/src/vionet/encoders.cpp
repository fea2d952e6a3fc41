#include "duvio/vionet/encoders.hpp"

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

using nn::Var;

VisualEncoder::VisualEncoder(const VioConfig& cfg, nn::Rng& rng)
    : height_(cfg.image_height), width_(cfg.image_width), slope_(cfg.leaky_slope) {
  const auto channels = cfg.visual_channels();
  std::size_t in = 2;
  for (std::size_t i = 0; i < kVisualKernels.size(); ++i) {
    const std::size_t k = kVisualKernels[i];
    convs_.emplace_back(in, channels[i], k, k, nn::Conv2dOptions::square(kVisualStrides[i], k / 2),
                        rng, slope_);
    in = channels[i];
  }
  const auto [mh, mw] = cfg.visual_map_size();
  fc_ = nn::Linear(in * mh * mw, cfg.visual_feature, rng, 1.0);
}

Var VisualEncoder::operator()(const Var& x) const {
  if (x.shape().size() != 4 || x.dim(1) != 2 || x.dim(2) != height_ || x.dim(3) != width_) {
    throw ShapeError(fmt::format("visual encoder: expected [N,2,{},{}], got {}", height_, width_,
                                 to_string(x.shape())));
  }
  Var h = x;
  for (const auto& conv : convs_) h = nn::leaky_relu(conv(h), slope_);
  return fc_(nn::flatten(h));
}

void VisualEncoder::collect(nn::ParamSet& set, const std::string& prefix) const {
  for (std::size_t i = 0; i < convs_.size(); ++i) convs_[i].collect(set, fmt::format("{}.conv{}", prefix, i + 1));
  fc_.collect(set, prefix + ".fc");
}

InertialEncoder::InertialEncoder(const VioConfig& cfg, nn::Rng& rng)
    : window_(cfg.imu_window), slope_(cfg.leaky_slope), project_(cfg.inertial_projection) {
  const std::size_t c = cfg.inertial_channels;
  convs_[0] = nn::Conv1d(6, c / 2, 3, 1, 1, rng, slope_);
  convs_[1] = nn::Conv1d(c / 2, c, 3, 1, 1, rng, slope_);
  convs_[2] = nn::Conv1d(c, c, 3, 1, 1, rng, slope_);
  if (project_) fc_ = nn::Linear(c * window_, cfg.inertial_feature, rng, 1.0);
}

Var InertialEncoder::feature_map(const Var& x) const {
  if (x.shape().size() != 3 || x.dim(1) != 6 || x.dim(2) != window_) {
    throw ShapeError(fmt::format("inertial encoder: expected [N,6,{}], got {}", window_,
                                 to_string(x.shape())));
  }
  Var h = x;
  for (const auto& conv : convs_) h = nn::leaky_relu(conv(h), slope_);
  return h;
}

Var InertialEncoder::operator()(const Var& x) const {
  const Var flat = nn::flatten(feature_map(x));
  return project_ ? fc_(flat) : flat;
}

void InertialEncoder::collect(nn::ParamSet& set, const std::string& prefix) const {
  for (std::size_t i = 0; i < convs_.size(); ++i) convs_[i].collect(set, fmt::format("{}.conv{}", prefix, i + 1));
  if (project_) fc_.collect(set, prefix + ".fc");
}

Var fuse_features(const Var& visual, const Var& inertial) { return nn::concat({visual, inertial}, 1); }

Tensor frame_pair_tensor(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(fmt::format("frame pair: {}x{} vs {}x{}", a.width(), a.height(), b.width(),
                                 b.height()));
  }
  Tensor t({1, 2, a.height(), a.width()});
  std::copy(a.pixels().begin(), a.pixels().end(), t.data());
  std::copy(b.pixels().begin(), b.pixels().end(), t.data() + a.size());
  return t;
}

Tensor imu_window_tensor(const std::array<ImuSample, kImuWindow>& imu) {
  Tensor t({1, 6, kImuWindow});
  for (std::size_t k = 0; k < kImuWindow; ++k)
    for (int a = 0; a < 3; ++a) {
      t[static_cast<std::size_t>(a) * kImuWindow + k] = imu[k].angular_velocity[a];
      t[static_cast<std::size_t>(a + 3) * kImuWindow + k] = imu[k].linear_acceleration[a];
    }
  return t;
}

}  // namespace duvio
