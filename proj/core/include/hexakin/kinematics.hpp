#pragma once

#include <Eigen/Dense>

#include "hexakin/pose.hpp"

namespace hexakin {

using RotationMatrix = Eigen::Matrix3d;
using HomogeneousTransform = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;

enum class Axis { X, Y, Z };

/// Elemental rotation about a world axis, angle in degrees.
RotationMatrix axis_rotation(Axis axis, double angle_deg);

/// Combined roll-pitch-yaw rotation R = Rz(gamma) * Ry(beta) * Rx(alpha).
RotationMatrix combined_rotation(const Pose& pose);

/// 4x4 rigid transform with rotation block combined_rotation(pose) and
/// translation (dx, dy, dz).
HomogeneousTransform homogeneous(const Pose& pose);

/// Rigid action R*p + d of a homogeneous transform on a point.
Vec3 apply(const HomogeneousTransform& transform, const Vec3& point);

/// Matrix product a*b.
HomogeneousTransform compose(const HomogeneousTransform& a, const HomogeneousTransform& b);

/// Euclidean distance in mm between the target grip position and a reached point.
double pose_error(const Pose& target, const Vec3& reached_position);

/// Magnitude of the relative rotation between two rotation matrices, degrees.
double rotation_angle_between_deg(const RotationMatrix& a, const RotationMatrix& b);

/// R^T R = I and det R = +1 within tol.
bool is_rotation(const RotationMatrix& r, double tol = 1e-9);

/// Last row (0,0,0,1) and rotation block passes is_rotation.
bool is_rigid_transform(const HomogeneousTransform& h, double tol = 1e-9);

} // namespace hexakin
