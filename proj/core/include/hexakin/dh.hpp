#pragma once

#include <array>

#include "hexakin/kinematics.hpp"
#include "hexakin/machine_config.hpp"

namespace hexakin {

/// One modified-DH parameter row: link length a_{i-1} (mm), link twist
/// alpha_{i-1} (deg), link offset r_i (mm), joint angle theta_i (deg).
struct DhRow {
    double a_prev = 0.0;
    double alpha_prev = 0.0;
    double r = 0.0;
    double theta = 0.0;
};

/// Solved joint variables of one leg chain. d4 is the prismatic actuator
/// length (the base-joint-to-platform-joint distance), angles in degrees.
struct LegSolution {
    int leg_index = 1; // 1..6
    double theta2 = 0.0;
    double theta3 = 0.0;
    double d4 = 0.0;
    double theta5 = 0.0;
    double theta6 = 0.0;
    double theta7 = 0.0;

    friend bool operator==(const LegSolution&, const LegSolution&) = default;
};

/// The eight DH rows of one leg path, world frame {0} to grip frame {8}.
struct LegDhTable {
    int leg_index = 1; // 1..6
    std::array<DhRow, 8> rows{};
};

/// Modified-convention frame transform
/// T = Rx(alpha_{i-1}) * Tx(a_{i-1}) * Rz(theta_i) * Tz(r_i).
HomogeneousTransform dh_transform(const DhRow& row);

/// Fill the 8-row skeleton with the leg's fixed theta1 (normalized to
/// [0, 360)), the machine constants, and the solved variables.
LegDhTable build_leg_table(int leg_index, const LegSolution& solution, const MachineConfig& config);

/// Product of the eight row transforms; the translation column is the grip
/// center this leg chain predicts.
HomogeneousTransform chain_pose(const LegDhTable& table);

/// Grip-center position predicted by the chain, world frame.
Vec3 chain_grip_position(const LegDhTable& table);

/// Partial chain through frame {5}: the platform-joint position (top of the
/// actuator) implied by theta2, theta3, d4.
Vec3 leg_joint_position(const LegDhTable& table);

/// Derivative of the grip position with respect to the six joint variables
/// (theta2, theta3, d4, theta5, theta6, theta7), in mm per degree for angles
/// and mm per mm for d4.
Eigen::Matrix<double, 3, 6> chain_jacobian(const LegDhTable& table);

} // namespace hexakin
