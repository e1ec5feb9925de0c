#include "hexakin/dh.hpp"

#include <cmath>

#include "hexakin/angles.hpp"

namespace hexakin {

HomogeneousTransform dh_transform(const DhRow& row) {
    const double ca = std::cos(deg_to_rad(row.alpha_prev));
    const double sa = std::sin(deg_to_rad(row.alpha_prev));
    const double ct = std::cos(deg_to_rad(row.theta));
    const double st = std::sin(deg_to_rad(row.theta));
    HomogeneousTransform t;
    t << ct,      -st,      0.0, row.a_prev,
         st * ca, ct * ca,  -sa, -row.r * sa,
         st * sa, ct * sa,  ca,  row.r * ca,
         0.0,     0.0,      0.0, 1.0;
    return t;
}

LegDhTable build_leg_table(int leg_index, const LegSolution& solution, const MachineConfig& config) {
    const double theta1 = wrap_deg_360(config.theta1_values[static_cast<size_t>(leg_index - 1)]);
    LegDhTable table;
    table.leg_index = leg_index;
    table.rows = {
        DhRow{0.0, 0.0, config.base_center_height, theta1},
        DhRow{config.base_joint_radius, 90.0, 0.0, solution.theta2},
        DhRow{0.0, 90.0, 0.0, solution.theta3},
        DhRow{0.0, 90.0, 0.0, -90.0},
        DhRow{0.0, 0.0, solution.d4, solution.theta5},
        DhRow{0.0, 90.0, 0.0, solution.theta6},
        DhRow{0.0, 90.0, 0.0, solution.theta7},
        DhRow{config.platform_joint_radius, 0.0, config.grip_offset, 0.0},
    };
    return table;
}

HomogeneousTransform chain_pose(const LegDhTable& table) {
    HomogeneousTransform t = HomogeneousTransform::Identity();
    for (const auto& row : table.rows) t = t * dh_transform(row);
    return t;
}

Vec3 chain_grip_position(const LegDhTable& table) {
    return chain_pose(table).block<3, 1>(0, 3);
}

Vec3 leg_joint_position(const LegDhTable& table) {
    HomogeneousTransform t = HomogeneousTransform::Identity();
    for (int i = 0; i < 5; ++i) t = t * dh_transform(table.rows[static_cast<size_t>(i)]);
    return t.block<3, 1>(0, 3);
}

Eigen::Matrix<double, 3, 6> chain_jacobian(const LegDhTable& table) {
    // Partial products T_0k for k = 1..8.
    std::array<HomogeneousTransform, 8> partial;
    HomogeneousTransform t = HomogeneousTransform::Identity();
    for (int i = 0; i < 8; ++i) {
        t = t * dh_transform(table.rows[static_cast<size_t>(i)]);
        partial[static_cast<size_t>(i)] = t;
    }
    const Vec3 grip = partial[7].block<3, 1>(0, 3);

    // theta_k rotates about frame k's z axis; r_5 translates along frame 5's z.
    auto z_axis = [&](int frame) { return Vec3(partial[static_cast<size_t>(frame - 1)].block<3, 1>(0, 2)); };
    auto origin = [&](int frame) { return Vec3(partial[static_cast<size_t>(frame - 1)].block<3, 1>(0, 3)); };
    auto revolute = [&](int frame) -> Vec3 {
        return deg_to_rad(1.0) * z_axis(frame).cross(grip - origin(frame));
    };

    Eigen::Matrix<double, 3, 6> jac;
    jac.col(0) = revolute(2);  // theta2
    jac.col(1) = revolute(3);  // theta3
    jac.col(2) = z_axis(5);    // d4
    jac.col(3) = revolute(5);  // theta5
    jac.col(4) = revolute(6);  // theta6
    jac.col(5) = revolute(7);  // theta7
    return jac;
}

} // namespace hexakin
