#pragma once

#include <array>
#include <vector>

#include "hexakin/kinematics.hpp"
#include "hexakin/machine_config.hpp"

namespace hexakin {

/// Joint positions of both plates, each in its own plate frame (plate center
/// at the origin, joints in the z=0 plane). pairing[i] is the index into
/// platform_joints assigned to leg i (leg i starts at base_joints[i]).
struct JointLayout {
    std::array<Vec3, 6> base_joints;
    std::array<Vec3, 6> platform_joints;
    std::array<int, 6> pairing;
    std::array<double, 6> base_angles_deg;
    std::array<double, 6> platform_angles_deg; // construction order, matches platform_joints

    const Vec3& platform_joint_of_leg(int leg) const { return platform_joints[static_cast<size_t>(pairing[static_cast<size_t>(leg)])]; }
    double platform_angle_of_leg(int leg) const { return platform_angles_deg[static_cast<size_t>(pairing[static_cast<size_t>(leg)])]; }
};

/// Place the six base joints at the configured theta1 angles and the six
/// platform joints pairwise symmetric about axes 120 degrees apart (rotated by
/// platform_start_angle), then pair each base joint with the platform joint
/// nearest in angle.
///
/// Throws ValidationError if the config invariants fail, GeometryInconsistent
/// if the hexagons do not close or the built layout contradicts the config
/// side lengths.
JointLayout build_joint_layout(const MachineConfig& config);

/// Every config and layout invariant as a report; never throws on bad data.
/// The report has no failed entries exactly when build_joint_layout succeeds.
std::vector<GeometryCheck> validate_geometry(const MachineConfig& config);

} // namespace hexakin
