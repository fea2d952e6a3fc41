#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "duvio/dataio/types.hpp"

namespace duvio {

// Fixed-axis XYZ convention: R = Rz(e.z) * Ry(e.y) * Rx(e.x).
Eigen::Matrix3d euler_xyz_to_matrix(const Eigen::Vector3d& euler);
// Inverse of euler_xyz_to_matrix with pitch in [-pi/2, pi/2].
Eigen::Vector3d matrix_to_euler_xyz(const Eigen::Matrix3d& r);

// T_a^-1 * T_b, rotation as XYZ Euler angles.
PoseDelta relative_pose(const AbsolutePose& a, const AbsolutePose& b);

// pose * delta (delta applied in pose's body frame).
AbsolutePose compose(const AbsolutePose& pose, const PoseDelta& delta, double timestamp);

// Angle of the rotation taking a to b.
double rotation_angle_between(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

}  // namespace duvio
