#pragma once

#include <array>
#include <vector>

#include "duvio/dataio/types.hpp"
#include "duvio/nn/layers.hpp"
#include "duvio/vionet/config.hpp"

namespace duvio {

// FlowNetSimple-style stack over two frames stacked on the channel axis.
class VisualEncoder {
 public:
  VisualEncoder() = default;
  VisualEncoder(const VioConfig& cfg, nn::Rng& rng);

  // x [N,2,H,W] -> [N,visual_feature]
  nn::Var operator()(const nn::Var& x) const;
  void collect(nn::ParamSet& set, const std::string& prefix) const;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  double slope_ = 0.1;
  std::vector<nn::Conv2d> convs_;
  nn::Linear fc_;
};

// Three 1-D convolutions over the 6 x imu_window array, then an optional
// projection.
class InertialEncoder {
 public:
  InertialEncoder() = default;
  InertialEncoder(const VioConfig& cfg, nn::Rng& rng);

  // x [N,6,imu_window] -> conv map [N,inertial_channels,imu_window]
  nn::Var feature_map(const nn::Var& x) const;
  // x [N,6,imu_window] -> [N,inertial_output()]
  nn::Var operator()(const nn::Var& x) const;
  void collect(nn::ParamSet& set, const std::string& prefix) const;

 private:
  std::size_t window_ = 0;
  double slope_ = 0.1;
  bool project_ = true;
  std::array<nn::Conv1d, 3> convs_;
  nn::Linear fc_;
};

// z = [x_v, x_i] along the feature axis.
nn::Var fuse_features(const nn::Var& visual, const nn::Var& inertial);

// Frame pair -> [1,2,H,W]; both rasters must already be H x W.
Tensor frame_pair_tensor(const Image& a, const Image& b);
// IMU window -> [1,6,11], channels (gx,gy,gz,ax,ay,az).
Tensor imu_window_tensor(const std::array<ImuSample, kImuWindow>& imu);

}  // namespace duvio
