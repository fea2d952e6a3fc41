#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "duvio/dataio/types.hpp"
#include "duvio/disturb/disturb.hpp"

namespace duvio {

enum class TrajectoryKind { line, circle, square, lissajous };

std::string_view to_string(TrajectoryKind kind);
TrajectoryKind parse_trajectory_kind(std::string_view name);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::lissajous;
  double speed = 0.5;      // m/s along the path
  double altitude = 2.0;   // m above the textured seabed (z = 0)
  double radius = 1.5;     // circle
  double side = 2.0;       // square edge length
  std::uint64_t seed = 1;  // lissajous shape
};

// Analytic state of the body at time t.
struct TrajectoryState {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
  Eigen::Vector3d acceleration;
  Eigen::Vector3d euler;          // XYZ fixed-axis (roll, pitch, yaw)
  Eigen::Vector3d body_rate;      // angular velocity in the body frame
};

class Trajectory {
 public:
  explicit Trajectory(const TrajectorySpec& spec);
  TrajectoryState at(double t) const;

 private:
  TrajectorySpec spec_;
  // Lissajous coefficients.
  double ax_ = 0, wx_ = 0, ay_ = 0, wy_ = 0, py_ = 0, az_ = 0, wz_ = 0;
  double ayaw_ = 0, wyaw_ = 0, aroll_ = 0, wroll_ = 0, apitch_ = 0, wpitch_ = 0;
};

struct SynthSpec {
  std::string sequence_id = "synth";
  TrajectorySpec trajectory;
  double duration = 5.0;    // s
  double frame_rate = 20.0;
  double imu_rate = 200.0;
  std::size_t width = 64;
  std::size_t height = 32;
  double focal_px = 0.0;    // 0: equal to the image width
  std::uint64_t texture_seed = 1;

  Scenario scenario = Scenario::original;
  TurbidityParams turbidity;
  DistortionParams distortion;

  bool gravity = true;
  double gyro_noise = 0.0;   // rad/s, white
  double accel_noise = 0.0;  // m/s^2, white
  Eigen::Vector3d gyro_bias = Eigen::Vector3d::Zero();
  Eigen::Vector3d accel_bias = Eigen::Vector3d::Zero();
  double frame_jitter = 0.0;  // s, uniform +/-
  double imu_jitter = 0.0;    // s, uniform +/-
  std::uint64_t seed = 0;     // noise and jitter

  // Reference poses at every k-th frame (the last frame is always kept);
  // `reference_gaps` removes those knot indices afterwards.
  std::size_t reference_stride = 1;
  std::vector<std::size_t> reference_gaps;
};

// Seabed texture intensity in [0.1, 0.9] at world (x, y).
class SeabedTexture {
 public:
  explicit SeabedTexture(std::uint64_t seed);
  double at(double x, double y) const;

 private:
  struct Wave {
    double kx, ky, phase, amplitude;
  };
  std::vector<Wave> waves_;
  double norm_ = 1.0;
};

// Renders the seabed as seen by a downward-looking camera at `pose`.
Image render_view(const SeabedTexture& texture, const AbsolutePose& pose, std::size_t width,
                  std::size_t height, double focal_px);

// Applies the scenario's disturbance to one frame. `frame_index` decorrelates
// distortion noise between frames.
Image disturb_frame(const Image& clean, Scenario scenario, const TurbidityParams& turbidity,
                    const DistortionParams& distortion, std::size_t frame_index);

// Rewrites every frame of `clean` for `scenario`; IMU and reference are untouched.
SequenceDataset disturb_sequence(const SequenceDataset& clean, Scenario scenario,
                                 const TurbidityParams& turbidity,
                                 const DistortionParams& distortion);

// Throws ConfigError on non-positive duration or rates.
SequenceDataset synthesize_sequence(const SynthSpec& spec);

}  // namespace duvio
