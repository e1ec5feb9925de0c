#include "hexakin/ik.hpp"

#include <cmath>

#include "hexakin/angles.hpp"
#include "hexakin/errors.hpp"
#include "hexakin/parallel.hpp"

namespace hexakin {

namespace {

constexpr double kDegenerateLegMm = 1e-9;
constexpr double kStrokeSlackMm = 1e-9; // float-noise slack on the hard limits

/// Leg vectors from base joint to platform joint, base frame.
std::array<Vec3, 6> leg_vectors(const Pose& pose, const JointLayout& layout,
                                const MachineConfig& config, RotationMatrix* rot_out) {
    const RotationMatrix r = combined_rotation(pose);
    if (rot_out) *rot_out = r;
    // Platform center in the base frame: grip pose minus the grip offset along
    // the platform z axis, then down by the base center height.
    const Vec3 grip(pose.dx, pose.dy, pose.dz);
    const Vec3 center = grip - r.col(2) * config.grip_offset - Vec3(0.0, 0.0, config.base_center_height);
    std::array<Vec3, 6> legs;
    for (int i = 0; i < 6; ++i)
        legs[static_cast<size_t>(i)] =
            center + r * layout.platform_joint_of_leg(i) - layout.base_joints[static_cast<size_t>(i)];
    return legs;
}

} // namespace

MotionLimits default_motion_limits(const MachineConfig& config) {
    const double z0 = config.home_grip_z();
    MotionLimits limits;
    limits.x_range = {-158.0, 158.0};
    limits.y_range = {-158.0, 158.0};
    limits.z_range = {z0, z0 + 50.0};
    limits.roll_range = {-30.0, 30.0};
    limits.pitch_range = {-30.0, 30.0};
    limits.yaw_range = {-55.0, 55.0};
    return limits;
}

std::array<double, 6> leg_lengths(const Pose& pose, const JointLayout& layout,
                                  const MachineConfig& config) {
    const auto legs = leg_vectors(pose, layout, config, nullptr);
    std::array<double, 6> lengths{};
    for (int i = 0; i < 6; ++i) lengths[static_cast<size_t>(i)] = legs[static_cast<size_t>(i)].norm();
    return lengths;
}

Eigen::Matrix<double, 6, 6> force_jacobian(const Pose& pose, const JointLayout& layout,
                                           const MachineConfig& config) {
    RotationMatrix r;
    const auto legs = leg_vectors(pose, layout, config, &r);
    Eigen::Matrix<double, 6, 6> jac;
    for (int i = 0; i < 6; ++i) {
        const double len = legs[static_cast<size_t>(i)].norm();
        if (len < kDegenerateLegMm)
            throw DegenerateLeg("force_jacobian: leg " + std::to_string(i + 1) + " has zero length");
        const Vec3 s = legs[static_cast<size_t>(i)] / len;
        const Vec3 moment = (r * layout.platform_joint_of_leg(i)).cross(s) / config.base_joint_radius;
        jac.block<1, 3>(i, 0) = s.transpose();
        jac.block<1, 3>(i, 3) = moment.transpose();
    }
    return jac;
}

std::string PoseValidity::reason() const {
    switch (kind) {
        case Kind::valid: return "Valid";
        case Kind::stroke_violation: return "StrokeViolation(leg " + std::to_string(leg) + ")";
        case Kind::singular: return "Singular";
    }
    return "?";
}

PoseValidity pose_valid(const Pose& pose, const JointLayout& layout, const MachineConfig& config,
                        double threshold) {
    PoseValidity result;
    const auto lengths = leg_lengths(pose, layout, config);
    const double lo = config.actuator_min_length - kStrokeSlackMm;
    const double hi = config.actuator_max_length() + kStrokeSlackMm;
    for (int i = 0; i < 6; ++i) {
        const double l = lengths[static_cast<size_t>(i)];
        if (l < lo || l > hi) {
            result.kind = PoseValidity::Kind::stroke_violation;
            result.leg = i + 1;
            return result;
        }
    }
    const double det = force_jacobian(pose, layout, config).determinant();
    if (std::abs(det) <= threshold) {
        result.kind = PoseValidity::Kind::singular;
        return result;
    }
    result.kind = PoseValidity::Kind::valid;
    result.record.pose = pose.normalized();
    result.record.leg_lengths = lengths;
    result.record.jacobian_det = det;
    return result;
}

std::vector<double> axis_samples(const Range& range, double step) {
    if (!(step > 0.0)) throw ValidationError("axis_samples: step must be strictly positive");
    if (range.second < range.first)
        throw ValidationError("axis_samples: range min exceeds max");
    std::vector<double> out;
    const double span = range.second - range.first;
    const auto count = static_cast<std::uint64_t>(std::floor(span / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(range.first + static_cast<double>(k) * step);
    return out;
}

WorkspaceResult generate_workspace(const JointLayout& layout, const MachineConfig& config,
                                   const MotionLimits& limits, const GridSteps& steps,
                                   double threshold, int jobs) {
    const auto xs = axis_samples(limits.x_range, steps.step_xy);
    const auto ys = axis_samples(limits.y_range, steps.step_xy);
    const auto zs = axis_samples(limits.z_range, steps.step_z);
    const auto as = axis_samples(limits.roll_range, steps.step_rot);
    const auto bs = axis_samples(limits.pitch_range, steps.step_rot);
    const auto gs = axis_samples(limits.yaw_range, steps.step_rot);

    const std::uint64_t nx = xs.size(), ny = ys.size(), nz = zs.size();
    const std::uint64_t na = as.size(), nb = bs.size(), ng = gs.size();
    const std::uint64_t total = nx * ny * nz * na * nb * ng;

    auto pose_at = [&](std::uint64_t id) {
        std::uint64_t rest = id;
        const std::uint64_t ig = rest % ng; rest /= ng;
        const std::uint64_t ib = rest % nb; rest /= nb;
        const std::uint64_t ia = rest % na; rest /= na;
        const std::uint64_t iz = rest % nz; rest /= nz;
        const std::uint64_t iy = rest % ny; rest /= ny;
        const std::uint64_t ix = rest;
        return Pose{xs[ix], ys[iy], zs[iz], as[ia], bs[ib], gs[ig]};
    };

    const int workers = resolve_jobs(jobs);
    struct ChunkOut {
        std::vector<WorkspaceRecord> records;
        std::uint64_t stroke = 0;
        std::uint64_t singular = 0;
    };
    std::vector<ChunkOut> chunks(static_cast<size_t>(workers));

    parallel_chunks(total, workers, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
        auto& out = chunks[static_cast<size_t>(chunk)];
        for (std::uint64_t id = begin; id < end; ++id) {
            PoseValidity v = pose_valid(pose_at(id), layout, config, threshold);
            if (v.valid()) {
                v.record.pose_id = id;
                out.records.push_back(std::move(v.record));
            } else if (v.kind == PoseValidity::Kind::stroke_violation) {
                ++out.stroke;
            } else {
                ++out.singular;
            }
        }
    });

    WorkspaceResult result;
    result.grid_total = total;
    for (auto& c : chunks) {
        result.stroke_rejected += c.stroke;
        result.singular_rejected += c.singular;
        result.records.insert(result.records.end(), c.records.begin(), c.records.end());
    }
    return result;
}

} // namespace hexakin
