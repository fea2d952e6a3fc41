#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace duvio {

struct VioConfig {
  std::size_t image_width = 512;
  std::size_t image_height = 256;
  std::size_t imu_window = 11;
  std::size_t visual_feature = 512;
  std::size_t inertial_channels = 256;
  // Linear projection of the flattened inertial map; off feeds all
  // inertial_channels * imu_window values to the fusion step.
  bool inertial_projection = true;
  std::size_t inertial_feature = 256;
  // Width of the first visual conv; the others scale with it.
  std::size_t conv_base = 64;
  std::size_t lstm_layers = 2;
  std::size_t lstm_hidden = 1024;
  std::size_t mlp_hidden = 128;
  double alpha = 100.0;
  double lr = 1e-6;
  std::size_t batch = 16;
  std::size_t epochs = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double leaky_slope = 0.1;
  // Frames per training clip; a clip holds seq_len - 1 windows.
  std::size_t seq_len = 11;
  bool visual_enabled = true;
  bool inertial_enabled = true;
  bool joint_dehaze_finetune = false;
  std::uint64_t seed = 7;

  std::vector<std::string> problems() const;
  void validate() const;

  std::vector<std::size_t> visual_channels() const;
  // Spatial size of the last visual conv map (height, width).
  std::array<std::size_t, 2> visual_map_size() const;
  std::size_t inertial_output() const;
  std::size_t fused_size() const;
};

inline constexpr std::array<std::size_t, 9> kVisualKernels{7, 5, 5, 3, 3, 3, 3, 3, 3};
inline constexpr std::array<std::size_t, 9> kVisualStrides{2, 2, 2, 2, 2, 2, 1, 1, 1};
inline constexpr std::array<std::size_t, 9> kVisualWidths{64, 128, 256, 256, 512, 512, 512, 512, 1024};

nlohmann::json to_json(const VioConfig& cfg);
// Missing keys keep their defaults; unknown keys are reported as problems.
VioConfig vio_config_from_json(const nlohmann::json& j, std::vector<std::string>* problems = nullptr);

}  // namespace duvio
