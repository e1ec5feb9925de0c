#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hexakin/dh.hpp"
#include "hexakin/ik.hpp"
#include "hexakin/joint_layout.hpp"
#include "hexakin/store.hpp"

namespace hexakin {

struct AngleBounds {
    double min = 0.0;
    double max = 0.0;
};

/// Iterative-search parameters. Angle bounds for theta2, theta3, and theta5
/// default to the observed solution envelopes padded by +-20 deg; bounding
/// theta5 also selects one of the two wrist branches deterministically.
/// theta6/theta7 default to a full turn because their zero references depend
/// on frame conventions.
struct SearchParams {
    double coarse_step = 1.0; // degrees
    double fine_step = 0.1;   // degrees, floor of the refinement schedule
    double error_limit = 1.0; // mm, grip-center acceptance gate
    AngleBounds theta2_bounds{-103.2, -18.0};
    AngleBounds theta3_bounds{-138.8, -43.4};
    AngleBounds theta5_bounds{70.0, 290.0};
    AngleBounds theta6_bounds{0.0, 360.0};
    AngleBounds theta7_bounds{-180.0, 180.0};
    int max_refinements = 8;
    int max_polish_sweeps = 64;
    bool warm_start = true; // false: cold full-grid scan over the angle bounds
};

/// Outcome of one leg search. solution is empty when no combination within
/// the bounds met error_limit (recorded, not thrown).
struct LegRecovery {
    std::optional<LegSolution> solution;
    double residual_mm = std::numeric_limits<double>::infinity();
    /// Angle between the chain rotation and the target pose rotation composed
    /// with the leg's fixed grip-frame alignment, degrees.
    double orientation_residual_deg = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations = 0;
};

struct FkResult {
    std::uint64_t pose_id = 0;
    Pose pose;
    std::array<std::optional<LegSolution>, 6> solutions;
    std::array<double, 6> residual_mm{};
    std::array<double, 6> orientation_residual_deg{};
    std::uint64_t evaluations = 0;

    bool solved() const {
        for (const auto& s : solutions)
            if (!s) return false;
        return true;
    }
};

/// Closed-form universal-joint angles (theta2, theta3) in degrees for the leg
/// direction implied by the target pose. Plugging them into
/// leg_joint_position with d4 = leg length reproduces the platform joint.
/// Throws DegenerateLeg when the leg length is below 1e-9 mm.
std::pair<double, double> seed_angles(const Pose& target_pose, int leg, const JointLayout& layout,
                                      const MachineConfig& config);

/// Candidate wrist triples (theta5, theta6, theta7) in degrees that align the
/// chain with the target orientation, ascending in theta5. Up to two Euler
/// branches exist.
std::vector<std::array<double, 3>> wrist_seeds(const Pose& target_pose, int leg, double theta2,
                                               double theta3, const JointLayout& layout,
                                               const MachineConfig& config);

struct PositionSearch {
    double theta2 = 0.0;
    double theta3 = 0.0;
    double joint_error_mm = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations = 0;
};

/// The iterative first stage of recover_leg on its own: lattice-search
/// theta2/theta3 with d4 fixed so the partial chain lands on the pose's
/// platform joint. warm_start restricts the coarse pass to a window around
/// seed_angles.
PositionSearch search_leg_position(const Pose& target_pose, int leg, double d4,
                                   const JointLayout& layout, const MachineConfig& config,
                                   const SearchParams& params);

/// Recover (theta2, theta3, d4 = leg_length, theta5, theta6, theta7) so the
/// chain grip position lands within params.error_limit of the target.
/// Coarse lattice scan, halving refinement down to fine_step, then a
/// fine-step coordinate polish; fully deterministic (ascending scan order,
/// strict-improvement updates).
LegRecovery recover_leg(const Pose& target_pose, int leg, double leg_length,
                        const JointLayout& layout, const MachineConfig& config,
                        const SearchParams& params);

/// recover_leg for all six legs of a workspace record.
FkResult recover_pose(const WorkspaceRecord& record, const JointLayout& layout,
                      const MachineConfig& config, const SearchParams& params);

/// The k database records nearest to the queried leg lengths in 6-D Euclidean
/// distance, ascending, ties broken by pose_id. Throws EmptyDatabase.
std::vector<NearestHit> fk_lookup(const std::array<double, 6>& lengths, const WorkspaceDb& db,
                                  std::size_t k);

} // namespace hexakin
