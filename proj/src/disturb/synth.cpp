#include "duvio/disturb/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/geometry.hpp"

namespace duvio {

namespace {

constexpr double kGravity = 9.81;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Body angular velocity for R = Rz(yaw) Ry(pitch) Rx(roll) given Euler rates.
Eigen::Vector3d body_rate_from_euler(const Eigen::Vector3d& e, const Eigen::Vector3d& de) {
  const double roll = e.x(), pitch = e.y();
  return {de.x() - de.z() * std::sin(pitch),
          de.y() * std::cos(roll) + de.z() * std::cos(pitch) * std::sin(roll),
          -de.y() * std::sin(roll) + de.z() * std::cos(pitch) * std::cos(roll)};
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
double smoothstep_d(double u) { return 6.0 * u * (1.0 - u); }
double smoothstep_dd(double u) { return 6.0 - 12.0 * u; }

}  // namespace

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::line: return "line";
    case TrajectoryKind::circle: return "circle";
    case TrajectoryKind::square: return "square";
    case TrajectoryKind::lissajous: return "lissajous";
  }
  return "line";
}

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "line") return TrajectoryKind::line;
  if (name == "circle") return TrajectoryKind::circle;
  if (name == "square") return TrajectoryKind::square;
  if (name == "lissajous") return TrajectoryKind::lissajous;
  throw ConfigError({fmt::format("trajectory '{}' is not one of: line, circle, square, lissajous", name)});
}

Trajectory::Trajectory(const TrajectorySpec& spec) : spec_(spec) {
  std::mt19937_64 rng(spec.seed);
  ax_ = uniform(rng, 0.1, 0.3);
  wx_ = uniform(rng, 0.5, 1.5);
  ay_ = uniform(rng, 0.3, 0.8);
  wy_ = uniform(rng, 0.4, 1.2);
  py_ = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  az_ = uniform(rng, 0.05, 0.2);
  wz_ = uniform(rng, 0.3, 1.0);
  ayaw_ = uniform(rng, 0.2, 0.6);
  wyaw_ = uniform(rng, 0.3, 1.0);
  aroll_ = uniform(rng, 0.02, 0.08);
  wroll_ = uniform(rng, 0.5, 1.5);
  apitch_ = uniform(rng, 0.02, 0.08);
  wpitch_ = uniform(rng, 0.5, 1.5);
}

TrajectoryState Trajectory::at(double t) const {
  TrajectoryState s;
  const double h = spec_.altitude;
  Eigen::Vector3d de = Eigen::Vector3d::Zero();
  switch (spec_.kind) {
    case TrajectoryKind::line:
      s.position = {spec_.speed * t, 0.0, h};
      s.velocity = {spec_.speed, 0.0, 0.0};
      s.acceleration.setZero();
      s.euler.setZero();
      break;
    case TrajectoryKind::circle: {
      const double r = spec_.radius, w = spec_.speed / spec_.radius;
      s.position = {r * std::sin(w * t), r * (1.0 - std::cos(w * t)), h};
      s.velocity = {r * w * std::cos(w * t), r * w * std::sin(w * t), 0.0};
      s.acceleration = {-r * w * w * std::sin(w * t), r * w * w * std::cos(w * t), 0.0};
      s.euler = {0.0, 0.0, w * t};
      de = {0.0, 0.0, w};
      break;
    }
    case TrajectoryKind::square: {
      const double side = spec_.side;
      const double edge_time = side / spec_.speed;
      const double turn_time = 1.0;
      const double segment = edge_time + turn_time;
      const double period = 4.0 * segment;
      const double tau = t - period * std::floor(t / period);
      const auto k = std::min<int>(3, static_cast<int>(tau / segment));
      const double local = tau - k * segment;
      static const Eigen::Vector3d corners[5] = {
          {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}};
      const Eigen::Vector3d dir(std::cos(k * std::numbers::pi / 2), std::sin(k * std::numbers::pi / 2), 0.0);
      const Eigen::Vector3d base = corners[k] * side + Eigen::Vector3d(0, 0, h);
      const double yaw0 = k * std::numbers::pi / 2;
      if (local < edge_time) {
        const double u = local / edge_time;
        s.position = base + dir * side * smoothstep(u);
        s.velocity = dir * side * smoothstep_d(u) / edge_time;
        s.acceleration = dir * side * smoothstep_dd(u) / (edge_time * edge_time);
        s.euler = {0.0, 0.0, yaw0};
      } else {
        const double u = (local - edge_time) / turn_time;
        s.position = corners[k + 1] * side + Eigen::Vector3d(0, 0, h);
        s.velocity.setZero();
        s.acceleration.setZero();
        s.euler = {0.0, 0.0, yaw0 + std::numbers::pi / 2 * smoothstep(u)};
        de = {0.0, 0.0, std::numbers::pi / 2 * smoothstep_d(u) / turn_time};
      }
      break;
    }
    case TrajectoryKind::lissajous: {
      const double v = spec_.speed;
      s.position = {v * t + ax_ * std::sin(wx_ * t), ay_ * std::sin(wy_ * t + py_),
                    h + az_ * std::sin(wz_ * t)};
      s.velocity = {v + ax_ * wx_ * std::cos(wx_ * t), ay_ * wy_ * std::cos(wy_ * t + py_),
                    az_ * wz_ * std::cos(wz_ * t)};
      s.acceleration = {-ax_ * wx_ * wx_ * std::sin(wx_ * t),
                        -ay_ * wy_ * wy_ * std::sin(wy_ * t + py_),
                        -az_ * wz_ * wz_ * std::sin(wz_ * t)};
      s.euler = {aroll_ * std::sin(wroll_ * t), apitch_ * std::sin(wpitch_ * t),
                 ayaw_ * std::sin(wyaw_ * t)};
      de = {aroll_ * wroll_ * std::cos(wroll_ * t), apitch_ * wpitch_ * std::cos(wpitch_ * t),
            ayaw_ * wyaw_ * std::cos(wyaw_ * t)};
      break;
    }
  }
  s.body_rate = body_rate_from_euler(s.euler, de);
  return s;
}

SeabedTexture::SeabedTexture(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eabedULL);
  double energy = 0.0;
  for (int i = 0; i < 24; ++i) {
    const double k = uniform(rng, 1.5, 12.0);
    const double dir = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double amp = 1.0 / std::sqrt(k);
    waves_.push_back({k * std::cos(dir), k * std::sin(dir), uniform(rng, 0.0, 2.0 * std::numbers::pi), amp});
    energy += 0.5 * amp * amp;
  }
  norm_ = 2.0 * std::sqrt(energy);
}

double SeabedTexture::at(double x, double y) const {
  double acc = 0.0;
  for (const auto& w : waves_) acc += w.amplitude * std::sin(w.kx * x + w.ky * y + w.phase);
  return 0.5 + 0.4 * std::tanh(acc / norm_);
}

Image render_view(const SeabedTexture& texture, const AbsolutePose& pose, std::size_t width,
                  std::size_t height, double focal_px) {
  const double f = focal_px > 0 ? focal_px : static_cast<double>(width);
  const double cx = 0.5 * static_cast<double>(width - 1);
  const double cy = 0.5 * static_cast<double>(height - 1);
  const Eigen::Matrix3d r = pose.rotation.toRotationMatrix();
  Image out(width, height);
  static constexpr double kOffsets[2] = {-0.25, 0.25};
  for (std::size_t v = 0; v < height; ++v)
    for (std::size_t u = 0; u < width; ++u) {
      double acc = 0.0;
      for (double ou : kOffsets)
        for (double ov : kOffsets) {
          // Camera looks along body -z; image up is body +x, image right is body -y.
          const Eigen::Vector3d ray_body((cy - (static_cast<double>(v) + ov)) / f,
                                         (cx - (static_cast<double>(u) + ou)) / f, -1.0);
          const Eigen::Vector3d ray = r * ray_body;
          if (ray.z() > -1e-6) {
            acc += 0.5;
            continue;
          }
          const double lambda = -pose.translation.z() / ray.z();
          const Eigen::Vector3d hit = pose.translation + lambda * ray;
          acc += texture.at(hit.x(), hit.y());
        }
      out.at(u, v) = acc / 4.0;
    }
  return out;
}

Image disturb_frame(const Image& clean, Scenario scenario, const TurbidityParams& turbidity,
                    const DistortionParams& distortion, std::size_t frame_index) {
  switch (scenario) {
    case Scenario::original: return clean;
    case Scenario::turbid: return quantize_8bit(apply_turbidity(clean, turbidity));
    case Scenario::distortion: {
      DistortionParams p = distortion;
      p.seed = distortion.seed + 0x9E3779B97F4A7C15ULL * (frame_index + 1);
      return quantize_8bit(apply_distortion(clean, p));
    }
  }
  return clean;
}

SequenceDataset disturb_sequence(const SequenceDataset& clean, Scenario scenario,
                                 const TurbidityParams& turbidity,
                                 const DistortionParams& distortion) {
  SequenceDataset out = clean;
  out.scenario = scenario;
  for (std::size_t i = 0; i < out.frames.size(); ++i) {
    out.frames[i].image = disturb_frame(clean.frames[i].image, scenario, turbidity, distortion, i);
  }
  return out;
}

SequenceDataset synthesize_sequence(const SynthSpec& spec) {
  std::vector<std::string> issues;
  if (!(spec.duration > 0.0)) issues.push_back(fmt::format("duration must be > 0 (got {})", spec.duration));
  if (!(spec.frame_rate > 0.0)) issues.push_back("frame_rate must be > 0");
  if (!(spec.imu_rate > 0.0)) issues.push_back("imu_rate must be > 0");
  if (spec.width == 0 || spec.height == 0) issues.push_back("image size must be non-zero");
  if (!(spec.trajectory.speed > 0.0)) issues.push_back("trajectory speed must be > 0");
  if (spec.reference_stride == 0) issues.push_back("reference_stride must be >= 1");
  if (!issues.empty()) throw ConfigError(std::move(issues));

  const Trajectory traj(spec.trajectory);
  const SeabedTexture texture(spec.texture_seed);
  std::mt19937_64 rng(spec.seed);
  auto pose_at = [&](double t) {
    const TrajectoryState s = traj.at(t);
    AbsolutePose p;
    p.timestamp = t;
    p.translation = s.position;
    p.rotation = Eigen::Quaterniond(euler_xyz_to_matrix(s.euler)).normalized();
    return p;
  };

  SequenceDataset ds;
  ds.sequence_id = spec.sequence_id;
  ds.scenario = spec.scenario;
  ds.meta.frame_rate_hz = spec.frame_rate;
  ds.meta.imu_rate_hz = spec.imu_rate;

  const auto frame_count = static_cast<std::size_t>(std::floor(spec.duration * spec.frame_rate + 1e-9)) + 1;
  const double frame_jitter = std::min(spec.frame_jitter, 0.25 / spec.frame_rate);
  const double imu_jitter = std::min(spec.imu_jitter, 0.25 / spec.imu_rate);
  std::vector<AbsolutePose> frame_poses;
  for (std::size_t i = 0; i < frame_count; ++i) {
    double t = static_cast<double>(i) / spec.frame_rate;
    if (frame_jitter > 0) t += uniform(rng, -frame_jitter, frame_jitter);
    frame_poses.push_back(pose_at(t));
  }
  ds.frames.resize(frame_count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(frame_count); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Image clean =
        quantize_8bit(render_view(texture, frame_poses[i], spec.width, spec.height, spec.focal_px));
    ds.frames[i].timestamp = frame_poses[i].timestamp;
    ds.frames[i].image = disturb_frame(clean, spec.scenario, spec.turbidity, spec.distortion, i);
  }

  const double t_first = frame_poses.front().timestamp;
  const double t_last = frame_poses.back().timestamp;
  const auto k_begin = static_cast<long long>(std::floor(t_first * spec.imu_rate)) - 1;
  const auto k_end = static_cast<long long>(std::ceil(t_last * spec.imu_rate)) + 1;
  std::normal_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector3d gravity(0.0, 0.0, spec.gravity ? -kGravity : 0.0);
  for (long long k = k_begin; k <= k_end; ++k) {
    double t = static_cast<double>(k) / spec.imu_rate;
    if (imu_jitter > 0) t += uniform(rng, -imu_jitter, imu_jitter);
    const TrajectoryState s = traj.at(t);
    const Eigen::Matrix3d r = euler_xyz_to_matrix(s.euler);
    ImuSample imu;
    imu.timestamp = t;
    imu.angular_velocity = s.body_rate + spec.gyro_bias;
    imu.linear_acceleration = r.transpose() * (s.acceleration - gravity) + spec.accel_bias;
    if (spec.gyro_noise > 0)
      for (int a = 0; a < 3; ++a) imu.angular_velocity[a] += spec.gyro_noise * unit(rng);
    if (spec.accel_noise > 0)
      for (int a = 0; a < 3; ++a) imu.linear_acceleration[a] += spec.accel_noise * unit(rng);
    ds.imu_stream.push_back(imu);
  }

  std::vector<AbsolutePose> knots;
  for (std::size_t i = 0; i < frame_count; ++i) {
    if (i % spec.reference_stride == 0 || i + 1 == frame_count) knots.push_back(frame_poses[i]);
  }
  for (std::size_t j = 0; j < knots.size(); ++j) {
    if (std::find(spec.reference_gaps.begin(), spec.reference_gaps.end(), j) ==
        spec.reference_gaps.end()) {
      ds.reference_poses.push_back(knots[j]);
    }
  }
  return ds;
}

}  // namespace duvio
