#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "duvio/core/image.hpp"

namespace duvio {

struct ImuSample {
  double timestamp = 0.0;
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();     // rad/s, body frame
  Eigen::Vector3d linear_acceleration = Eigen::Vector3d::Zero();  // m/s^2, specific force

  bool operator==(const ImuSample&) const = default;
};

struct Frame {
  double timestamp = 0.0;
  Image image;

  bool operator==(const Frame&) const = default;
};

// T_world_body at `timestamp`.
struct AbsolutePose {
  double timestamp = 0.0;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
};

// Relative motion of frame b expressed in frame a's body frame. `phi` holds
// fixed-axis XYZ Euler angles: R = Rz(phi.z) * Ry(phi.y) * Rx(phi.x).
struct PoseDelta {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();

  bool operator==(const PoseDelta&) const = default;
};

enum class Scenario { original, distortion, turbid };

std::string_view to_string(Scenario s);
// Throws ConfigError naming the allowed values.
Scenario parse_scenario(std::string_view name);

inline constexpr std::size_t kImuWindow = 11;

struct SampleWindow {
  Frame frame_a;
  Frame frame_b;
  std::array<ImuSample, kImuWindow> imu;
  PoseDelta target;
};

// Rates and tolerances declared by a sequence manifest.
struct SequenceMeta {
  double frame_rate_hz = 20.0;
  double imu_rate_hz = 200.0;
  double rate_tolerance = 0.1;  // relative, on the median interval
  std::string time_epoch = "seconds since sequence start";
};

struct SequenceDataset {
  std::string sequence_id;
  Scenario scenario = Scenario::original;
  SequenceMeta meta;
  std::vector<Frame> frames;
  std::vector<ImuSample> imu_stream;
  std::vector<AbsolutePose> reference_poses;

  std::vector<double> frame_times() const;
};

}  // namespace duvio
