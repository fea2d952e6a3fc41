#include "duvio/dataio/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

namespace {

void check_knots(std::span<const AbsolutePose> poses) {
  if (poses.size() < 2) throw ValidationError("interpolation needs at least two poses", 0);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    if (!(poses[i].timestamp > poses[i - 1].timestamp)) {
      throw ValidationError(fmt::format("reference pose timestamps not increasing at {}", i), i);
    }
  }
}

AbsolutePose interpolate_checked(std::span<const AbsolutePose> poses, double t) {
  if (t < poses.front().timestamp || t > poses.back().timestamp) {
    throw RangeError(fmt::format("query time {} outside reference range [{}, {}]", t,
                                 poses.front().timestamp, poses.back().timestamp));
  }
  const auto upper = std::upper_bound(poses.begin(), poses.end(), t,
                                      [](double v, const AbsolutePose& p) { return v < p.timestamp; });
  const auto hi = static_cast<std::size_t>(std::distance(poses.begin(), upper));
  // poses[hi - 1].timestamp <= t, and hi == size only when t is the last knot.
  const AbsolutePose& a = poses[hi - 1];
  if (a.timestamp == t) return a;
  const AbsolutePose& b = poses[hi];
  const double s = (t - a.timestamp) / (b.timestamp - a.timestamp);
  AbsolutePose out;
  out.timestamp = t;
  out.translation = a.translation + s * (b.translation - a.translation);
  out.rotation = a.rotation.slerp(s, b.rotation).normalized();
  return out;
}

}  // namespace

std::vector<AbsolutePose> interpolate_reference(std::span<const AbsolutePose> poses,
                                                std::span<const double> query_times) {
  check_knots(poses);
  std::vector<AbsolutePose> out;
  out.reserve(query_times.size());
  for (double t : query_times) out.push_back(interpolate_checked(poses, t));
  return out;
}

AbsolutePose interpolate_reference(std::span<const AbsolutePose> poses, double query_time) {
  check_knots(poses);
  return interpolate_checked(poses, query_time);
}

ImuSample interpolate_imu(std::span<const ImuSample> stream, double t, double half_period) {
  if (stream.empty()) throw CoverageError("empty IMU stream");
  if (t <= stream.front().timestamp) {
    if (stream.front().timestamp - t > half_period + 1e-12) {
      throw CoverageError(fmt::format("IMU stream starts at {} after {}", stream.front().timestamp, t));
    }
    ImuSample s = stream.front();
    s.timestamp = t;
    return s;
  }
  if (t >= stream.back().timestamp) {
    if (t - stream.back().timestamp > half_period + 1e-12) {
      throw CoverageError(fmt::format("IMU stream ends at {} before {}", stream.back().timestamp, t));
    }
    ImuSample s = stream.back();
    s.timestamp = t;
    return s;
  }
  const auto upper = std::upper_bound(stream.begin(), stream.end(), t,
                                      [](double v, const ImuSample& s) { return v < s.timestamp; });
  const ImuSample& b = *upper;
  const ImuSample& a = *(upper - 1);
  ImuSample out;
  out.timestamp = t;
  if (a.timestamp == t) {
    out.angular_velocity = a.angular_velocity;
    out.linear_acceleration = a.linear_acceleration;
    return out;
  }
  const double s = (t - a.timestamp) / (b.timestamp - a.timestamp);
  out.angular_velocity = a.angular_velocity + s * (b.angular_velocity - a.angular_velocity);
  out.linear_acceleration =
      a.linear_acceleration + s * (b.linear_acceleration - a.linear_acceleration);
  return out;
}

}  // namespace duvio
