#pragma once

#include <array>
#include <string>
#include <vector>

namespace hexakin {

/// Full geometric description of a 6-UPS platform. Lengths in mm, angles in
/// degrees. Field names match the JSON config schema one-to-one.
struct MachineConfig {
    double base_joint_radius = 0.0;
    double base_small_side = 0.0;
    double base_large_side = 0.0;
    double platform_joint_radius = 0.0;
    double platform_small_side = 0.0;
    double platform_large_side = 0.0;
    double actuator_min_length = 0.0;
    double actuator_stroke = 0.0;
    double base_center_height = 0.0;   // world origin to base center
    double grip_offset = 0.0;          // platform center to grip center, along platform z
    double home_height = 0.0;          // base center to platform center at test start
    std::array<double, 6> theta1_values{};
    double platform_start_angle = 60.0;

    double actuator_max_length() const { return actuator_min_length + actuator_stroke; }

    /// Grip-center height above the world origin at the home pose.
    double home_grip_z() const { return base_center_height + home_height + grip_offset; }
};

/// One validation check outcome; residual units depend on the check.
struct GeometryCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    std::string detail;
};

/// Run every MachineConfig invariant. Failures are data, not errors.
std::vector<GeometryCheck> validate_config(const MachineConfig& config);

/// Throw ValidationError naming the first failed config invariant.
void require_valid_config(const MachineConfig& config);

/// Parse and validate a machine config JSON file.
/// Throws ParseError on syntax/schema problems, ValidationError on invariant
/// violations.
MachineConfig load_machine_config(const std::string& path);

/// Canonical fixed-precision serialization; the basis of config_hash.
std::string canonical_config_string(const MachineConfig& config);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const MachineConfig& config);

/// Semi-symmetric hexagon closure angle: sum in degrees of the six chord arcs
/// implied by the alternating small/large sides on a circle of given radius.
double hexagon_closure_deg(double radius, double small_side, double large_side);

} // namespace hexakin
