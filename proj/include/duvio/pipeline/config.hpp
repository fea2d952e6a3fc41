#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "duvio/dataio/split.hpp"
#include "duvio/dataio/types.hpp"
#include "duvio/dehaze/discriminator.hpp"
#include "duvio/dehaze/generator.hpp"
#include "duvio/dehaze/train.hpp"
#include "duvio/disturb/disturb.hpp"
#include "duvio/disturb/synth.hpp"
#include "duvio/eval/rmse.hpp"
#include "duvio/vionet/config.hpp"

namespace duvio {

enum class DehazeMode { on, off, both };

std::string_view to_string(DehazeMode m);

struct DehazeSettings {
  DehazeMode mode = DehazeMode::on;
  // Pretrained dehazer; empty trains one from the training sequences.
  std::filesystem::path weights;
  GeneratorConfig generator;
  DiscriminatorConfig discriminator;
  DehazeTrainConfig train;
  // Cap on training pairs (evenly strided over all frames); 0 keeps all.
  std::size_t max_pairs = 0;
};

struct SyntheticSequence {
  std::string id;
  TrajectoryKind trajectory = TrajectoryKind::lissajous;
  double speed = 0.5;
};

// Generated sequences replace dataset_root when enabled.
struct SyntheticSettings {
  bool enabled = false;
  std::vector<SyntheticSequence> sequences;
  double duration = 5.0;
  double frame_rate = 20.0;
  double imu_rate = 200.0;
  std::size_t width = 64;
  std::size_t height = 32;
  double altitude = 2.0;
  double gyro_noise = 0.0;
  double accel_noise = 0.0;
  double gyro_bias = 0.0;   // same value on every axis
  double accel_bias = 0.0;
  double frame_jitter = 0.0;
  double imu_jitter = 0.0;
  std::size_t reference_stride = 1;
};

struct HardwareSettings {
  std::string probe = "none";  // none | stub | command
  std::optional<double> stub_power, stub_util, stub_memory, stub_temperature;
  std::map<std::string, std::string> commands;
};

struct ExperimentConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path output_dir = "duvio_out";
  std::uint64_t seed = 42;
  bool determinism = true;
  std::vector<Scenario> scenarios{Scenario::original};
  DatasetSplit split;
  double data_fraction = 1.0;
  RetainMode fraction_mode = RetainMode::prefix;
  DehazeSettings dehaze;
  VioConfig vio;
  SyntheticSettings synthetic;
  TurbidityParams turbidity;
  DistortionParams distortion;
  RmseOptions rmse;
  HardwareSettings hardware;
};

// Every violation is collected; throws ConfigError when any is found. Omitted
// keys keep their defaults. Component seeds are derived from `seed`.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig validate_config(const std::filesystem::path& path);

// Sets the experiment seed and every seed derived from it.
void apply_seed(ExperimentConfig& cfg, std::uint64_t seed);

// Normalised view of the effective configuration (provenance and hashing).
nlohmann::json to_json(const ExperimentConfig& cfg);

// Converts a YAML document to JSON; scalars become numbers/booleans where
// they parse as such. Exposed for the CLI's --cfg files.
nlohmann::json yaml_to_json(const std::string& yaml_text);

}  // namespace duvio
