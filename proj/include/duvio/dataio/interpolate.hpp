#pragma once

#include <span>
#include <vector>

#include "duvio/dataio/types.hpp"

namespace duvio {

// Translation: per-component lerp. Rotation: slerp between the bracketing
// quaternions. Exact at knots. Throws RangeError outside [first, last] and
// ValidationError for fewer than two poses or non-increasing knot times.
std::vector<AbsolutePose> interpolate_reference(std::span<const AbsolutePose> poses,
                                                std::span<const double> query_times);

AbsolutePose interpolate_reference(std::span<const AbsolutePose> poses, double query_time);

// Linear interpolation of the IMU stream at `t`. Times within half an IMU
// period outside the stream hold the end sample; anything further throws
// CoverageError.
ImuSample interpolate_imu(std::span<const ImuSample> stream, double t, double half_period);

}  // namespace duvio
