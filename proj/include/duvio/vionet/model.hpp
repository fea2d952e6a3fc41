#pragma once

#include <filesystem>
#include <vector>

#include "duvio/dataio/types.hpp"
#include "duvio/dehaze/generator.hpp"
#include "duvio/vionet/encoders.hpp"
#include "duvio/vionet/temporal.hpp"

namespace duvio {

class VioNet {
 public:
  explicit VioNet(VioConfig cfg);

  const VioConfig& config() const { return cfg_; }
  nn::ParamSet& params() { return params_; }
  const nn::ParamSet& params() const { return params_; }

  const VisualEncoder& visual() const { return visual_; }
  const InertialEncoder& inertial() const { return inertial_; }
  const TemporalModel& temporal() const { return temporal_; }

  // frames [N,2,H,W], imu [N,6,11] -> z [N,fused_size]. Disabled modalities
  // contribute zeros.
  nn::Var encode(const nn::Var& frames, const nn::Var& imu) const;

  // frames [T*B,2,H,W] and imu [T*B,6,11] ordered time-major (index t*B+b).
  // Returns predictions [T*B,6] from one zero-initialised rollout per clip.
  nn::Var forward_clips(const nn::Var& frames, const nn::Var& imu, std::size_t steps) const;

 private:
  VioConfig cfg_;
  VisualEncoder visual_;
  InertialEncoder inertial_;
  TemporalModel temporal_;
  nn::ParamSet params_;
};

void save_vio(const std::filesystem::path& path, const VioNet& net);
VioNet load_vio(const std::filesystem::path& path);

// Frames with every raster passed through `dehazer` (resampled to its input
// size and back when needed).
SequenceDataset dehaze_sequence(const SequenceDataset& dataset, const Generator& dehazer);

// N-1 relative poses from one stateful rollout over the whole sequence.
std::vector<PoseDelta> infer_sequence(const SequenceDataset& dataset, const VioNet& net,
                                      const Generator* dehazer = nullptr);

}  // namespace duvio
