#pragma once

#include <cmath>
#include <numbers>

namespace hexakin {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg / kDegPerRad; }
constexpr double rad_to_deg(double rad) { return rad * kDegPerRad; }

/// Normalize an angle in degrees to (-180, 180].
inline double wrap_deg_180(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a <= -180.0) a += 360.0;
    if (a > 180.0) a -= 360.0;
    return a;
}

/// Normalize an angle in degrees to [0, 360).
inline double wrap_deg_360(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    return a;
}

/// Absolute circular distance between two angles in degrees, in [0, 180].
inline double circular_distance_deg(double a, double b) {
    return std::abs(wrap_deg_180(a - b));
}

} // namespace hexakin
