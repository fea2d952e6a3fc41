#include "duvio/dataio/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "duvio/core/error.hpp"

namespace duvio {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::original: return "original";
    case Scenario::distortion: return "distortion";
    case Scenario::turbid: return "turbid";
  }
  return "original";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "original") return Scenario::original;
  if (name == "distortion") return Scenario::distortion;
  if (name == "turbid") return Scenario::turbid;
  throw ConfigError({"scenario '" + std::string(name) +
                     "' is not one of: original, distortion, turbid"});
}

std::vector<double> SequenceDataset::frame_times() const {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.timestamp);
  return t;
}

Eigen::Matrix3d euler_xyz_to_matrix(const Eigen::Vector3d& e) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(e.z(), Vector3d::UnitZ()) * AngleAxisd(e.y(), Vector3d::UnitY()) *
          AngleAxisd(e.x(), Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Vector3d matrix_to_euler_xyz(const Eigen::Matrix3d& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

PoseDelta relative_pose(const AbsolutePose& a, const AbsolutePose& b) {
  const Eigen::Matrix3d ra = a.rotation.toRotationMatrix();
  PoseDelta d;
  d.v = ra.transpose() * (b.translation - a.translation);
  d.phi = matrix_to_euler_xyz(ra.transpose() * b.rotation.toRotationMatrix());
  return d;
}

AbsolutePose compose(const AbsolutePose& pose, const PoseDelta& delta, double timestamp) {
  AbsolutePose out;
  out.timestamp = timestamp;
  out.translation = pose.translation + pose.rotation * delta.v;
  out.rotation = (pose.rotation * Eigen::Quaterniond(euler_xyz_to_matrix(delta.phi))).normalized();
  return out;
}

double rotation_angle_between(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return a.angularDistance(b);
}

}  // namespace duvio
