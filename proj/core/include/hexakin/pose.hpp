#pragma once

#include <cmath>

#include "hexakin/angles.hpp"

namespace hexakin {

/// 6-DOF pose of the grip center in the world frame: translation in mm,
/// roll/pitch/yaw (alpha about x, beta about y, gamma about z) in degrees.
struct Pose {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    /// Copy with angles wrapped to (-180, 180].
    [[nodiscard]] Pose normalized() const {
        return Pose{dx, dy, dz, wrap_deg_180(alpha), wrap_deg_180(beta), wrap_deg_180(gamma)};
    }

    [[nodiscard]] bool finite() const {
        return std::isfinite(dx) && std::isfinite(dy) && std::isfinite(dz) &&
               std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma);
    }

    friend bool operator==(const Pose&, const Pose&) = default;
};

} // namespace hexakin
