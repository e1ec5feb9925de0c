#pragma once

#include <random>

#include "hexakin/ik.hpp"
#include "hexakin/joint_layout.hpp"
#include "hexakin/machine_config.hpp"
#include "hexakin/rng.hpp"

namespace hexakin::test {

inline const MachineConfig& tiger_config() {
    static const MachineConfig config = load_machine_config(HEXAKIN_TIGER_CONFIG);
    return config;
}

inline const JointLayout& tiger_layout() {
    static const JointLayout layout = build_joint_layout(tiger_config());
    return layout;
}

inline Pose tiger_home_pose() {
    return Pose{0.0, 0.0, tiger_config().home_grip_z(), 0.0, 0.0, 0.0};
}

/// Random pose within the stock motion limits (not necessarily valid).
inline Pose random_pose_in_limits(std::mt19937_64& rng) {
    const MotionLimits lim = default_motion_limits(tiger_config());
    auto pick = [&](const Range& r) {
        return r.first + uniform_unit(rng) * (r.second - r.first);
    };
    return Pose{pick(lim.x_range),    pick(lim.y_range),     pick(lim.z_range),
                pick(lim.roll_range), pick(lim.pitch_range), pick(lim.yaw_range)};
}

/// Rejection-sample a pose that passes stroke and singularity checks.
inline WorkspaceRecord random_valid_record(std::mt19937_64& rng, std::uint64_t pose_id = 0) {
    for (;;) {
        const Pose pose = random_pose_in_limits(rng);
        PoseValidity v = pose_valid(pose, tiger_layout(), tiger_config());
        if (v.valid()) {
            v.record.pose_id = pose_id;
            return v.record;
        }
    }
}

/// Plain 4x4 product, independent of the Eigen-based implementation path.
inline std::array<std::array<double, 4>, 4> naive_multiply(
    const std::array<std::array<double, 4>, 4>& a, const std::array<std::array<double, 4>, 4>& b) {
    std::array<std::array<double, 4>, 4> c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a[static_cast<size_t>(i)][static_cast<size_t>(k)] * b[static_cast<size_t>(k)][static_cast<size_t>(j)];
            c[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        }
    return c;
}

} // namespace hexakin::test
