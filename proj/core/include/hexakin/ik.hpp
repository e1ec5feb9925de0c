#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hexakin/joint_layout.hpp"
#include "hexakin/kinematics.hpp"
#include "hexakin/machine_config.hpp"
#include "hexakin/pose.hpp"

namespace hexakin {

using Range = std::pair<double, double>; // (min, max)

/// Sweep limits of the grip pose, mm and degrees.
struct MotionLimits {
    Range x_range{0.0, 0.0};
    Range y_range{0.0, 0.0};
    Range z_range{0.0, 0.0};
    Range roll_range{0.0, 0.0};
    Range pitch_range{0.0, 0.0};
    Range yaw_range{0.0, 0.0};
};

/// Grid increments: one step for x and y, one for z, one shared by the three
/// rotations.
struct GridSteps {
    double step_xy = 15.0;
    double step_z = 10.0;
    double step_rot = 10.0;
};

struct WorkspaceRecord {
    std::uint64_t pose_id = 0;
    Pose pose;
    std::array<double, 6> leg_lengths{};
    double jacobian_det = 0.0;
};

/// Stock limits: +-158 mm in x/y about home, home to home+50 mm in z,
/// +-30 deg roll/pitch, +-55 deg yaw.
MotionLimits default_motion_limits(const MachineConfig& config);

/// Default normalized-determinant singularity threshold.
inline constexpr double kDefaultSingularityThreshold = 1e-6;

/// Closed-form inverse kinematics: |h + R*p_i - b_i| per leg, mm.
std::array<double, 6> leg_lengths(const Pose& pose, const JointLayout& layout,
                                  const MachineConfig& config);

/// 6x6 force Jacobian; row i is [s_i^T, ((R*p_i) x s_i)^T] with the moment
/// columns divided by the base joint radius so the determinant is scale-free.
/// Throws DegenerateLeg if a leg length is below 1e-9 mm.
Eigen::Matrix<double, 6, 6> force_jacobian(const Pose& pose, const JointLayout& layout,
                                           const MachineConfig& config);

struct PoseValidity {
    enum class Kind { valid, stroke_violation, singular };
    Kind kind = Kind::valid;
    int leg = 0; // 1..6 for stroke violations
    WorkspaceRecord record;

    bool valid() const { return kind == Kind::valid; }
    std::string reason() const;
};

/// Valid iff every leg length is inside the actuator limits and |det J|
/// exceeds the threshold. The first violated condition wins.
PoseValidity pose_valid(const Pose& pose, const JointLayout& layout, const MachineConfig& config,
                        double threshold = kDefaultSingularityThreshold);

/// Inclusive-endpoint sample positions min, min+step, ... while <= max.
std::vector<double> axis_samples(const Range& range, double step);

struct WorkspaceResult {
    std::vector<WorkspaceRecord> records; // ascending pose_id
    std::uint64_t grid_total = 0;
    std::uint64_t stroke_rejected = 0;
    std::uint64_t singular_rejected = 0;
};

/// Enumerate the full Cartesian pose grid (order x, y, z, roll, pitch, yaw
/// with yaw fastest; pose_id = flat grid index) and keep the valid poses.
/// The record set is independent of the worker count.
WorkspaceResult generate_workspace(const JointLayout& layout, const MachineConfig& config,
                                   const MotionLimits& limits, const GridSteps& steps,
                                   double threshold = kDefaultSingularityThreshold, int jobs = 0);

} // namespace hexakin
