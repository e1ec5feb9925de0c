#include "hexakin/joint_layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hexakin/angles.hpp"
#include "hexakin/errors.hpp"

namespace hexakin {

namespace {

// Table values are rounded to 0.1 deg, so theta1-derived chords can differ
// from the configured side lengths by around a millimetre on large plates.
constexpr double kChordConsistencyTolMm = 2.0;

std::array<double, 6> base_angles(const MachineConfig& c) {
    std::array<double, 6> a{};
    for (int i = 0; i < 6; ++i) a[static_cast<size_t>(i)] = wrap_deg_360(c.theta1_values[static_cast<size_t>(i)]);
    return a;
}

std::array<double, 6> platform_angles(const MachineConfig& c) {
    const double half = rad_to_deg(std::asin(c.platform_large_side / (2.0 * c.platform_joint_radius)));
    std::array<double, 6> a{};
    for (int k = 0; k < 3; ++k) {
        const double axis = 90.0 + c.platform_start_angle + 120.0 * k;
        a[static_cast<size_t>(2 * k)] = wrap_deg_360(axis - half);
        a[static_cast<size_t>(2 * k + 1)] = wrap_deg_360(axis + half);
    }
    return a;
}

std::array<Vec3, 6> on_circle(const std::array<double, 6>& angles_deg, double radius) {
    std::array<Vec3, 6> pts;
    for (int i = 0; i < 6; ++i) {
        const double t = deg_to_rad(angles_deg[static_cast<size_t>(i)]);
        pts[static_cast<size_t>(i)] = Vec3(radius * std::cos(t), radius * std::sin(t), 0.0);
    }
    return pts;
}

// Chord lengths between angularly consecutive joints, and the worst mismatch
// against the expected alternating small/large pattern.
struct ChordReport {
    bool alternates = false;
    double worst_residual = 0.0;
};

ChordReport chord_pattern(const std::array<double, 6>& angles_deg, double radius,
                          double small_side, double large_side) {
    std::array<double, 6> sorted = angles_deg;
    std::sort(sorted.begin(), sorted.end());
    std::array<double, 6> chords{};
    for (int i = 0; i < 6; ++i) {
        const double gap = (i < 5) ? sorted[static_cast<size_t>(i + 1)] - sorted[static_cast<size_t>(i)]
                                   : 360.0 - sorted[5] + sorted[0];
        chords[static_cast<size_t>(i)] = 2.0 * radius * std::sin(deg_to_rad(gap / 2.0));
    }
    // The first chord decides which side starts the pattern.
    const double first_small = std::abs(chords[0] - small_side);
    const double first_large = std::abs(chords[0] - large_side);
    const double s0 = first_small <= first_large ? small_side : large_side;
    const double s1 = first_small <= first_large ? large_side : small_side;
    ChordReport rep;
    rep.alternates = true;
    for (int i = 0; i < 6; ++i) {
        const double expected = (i % 2 == 0) ? s0 : s1;
        const double res = std::abs(chords[static_cast<size_t>(i)] - expected);
        rep.worst_residual = std::max(rep.worst_residual, res);
        if (res > kChordConsistencyTolMm) rep.alternates = false;
    }
    return rep;
}

bool assign_pairing(const std::array<double, 6>& base_deg, const std::array<double, 6>& plat_deg,
                    std::array<int, 6>& pairing) {
    std::array<bool, 6> used{};
    for (int i = 0; i < 6; ++i) {
        int best = -1;
        double best_d = 1e300;
        for (int j = 0; j < 6; ++j) {
            const double d = circular_distance_deg(plat_deg[static_cast<size_t>(j)], base_deg[static_cast<size_t>(i)]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        pairing[static_cast<size_t>(i)] = best;
        if (used[static_cast<size_t>(best)]) return false;
        used[static_cast<size_t>(best)] = true;
    }
    return true;
}

std::vector<GeometryCheck> layout_checks(const MachineConfig& c) {
    std::vector<GeometryCheck> checks;
    const auto ba = base_angles(c);
    const auto pa = platform_angles(c);

    const auto base_rep = chord_pattern(ba, c.base_joint_radius, c.base_small_side, c.base_large_side);
    checks.push_back({"base_chord_pattern", base_rep.alternates, base_rep.worst_residual,
                      "max |chord - side|, mm"});
    const auto plat_rep = chord_pattern(pa, c.platform_joint_radius, c.platform_small_side,
                                        c.platform_large_side);
    checks.push_back({"platform_chord_pattern", plat_rep.alternates, plat_rep.worst_residual,
                      "max |chord - side|, mm"});

    std::array<int, 6> pairing{};
    const bool bijective = assign_pairing(ba, pa, pairing);
    checks.push_back({"leg_pairing_bijective", bijective, 0.0, ""});

    // On-circle residual of the constructed points, for the record.
    double worst = 0.0;
    for (const auto& p : on_circle(ba, c.base_joint_radius))
        worst = std::max(worst, std::abs(p.norm() - c.base_joint_radius));
    for (const auto& p : on_circle(pa, c.platform_joint_radius))
        worst = std::max(worst, std::abs(p.norm() - c.platform_joint_radius));
    checks.push_back({"joints_on_circle", worst <= 1e-9, worst, "max | |joint| - R |, mm"});

    return checks;
}

} // namespace

JointLayout build_joint_layout(const MachineConfig& config) {
    for (const auto& check : validate_config(config)) {
        if (check.passed) continue;
        std::ostringstream msg;
        msg << "cannot build joint layout: " << check.name << " failed, residual "
            << check.residual;
        if (check.name == "base_hexagon_closure" || check.name == "platform_hexagon_closure")
            throw GeometryInconsistent(msg.str());
        throw ValidationError(msg.str());
    }
    for (const auto& check : layout_checks(config)) {
        if (check.passed) continue;
        std::ostringstream msg;
        msg << "cannot build joint layout: " << check.name << " failed, residual "
            << check.residual;
        throw GeometryInconsistent(msg.str());
    }

    JointLayout layout;
    layout.base_angles_deg = base_angles(config);
    layout.platform_angles_deg = platform_angles(config);
    layout.base_joints = on_circle(layout.base_angles_deg, config.base_joint_radius);
    layout.platform_joints = on_circle(layout.platform_angles_deg, config.platform_joint_radius);
    assign_pairing(layout.base_angles_deg, layout.platform_angles_deg, layout.pairing);
    return layout;
}

std::vector<GeometryCheck> validate_geometry(const MachineConfig& config) {
    std::vector<GeometryCheck> checks = validate_config(config);
    const bool constructible = std::all_of(checks.begin(), checks.end(), [](const GeometryCheck& c) {
        return c.passed || c.name == "base_hexagon_closure" || c.name == "platform_hexagon_closure";
    });
    if (constructible) {
        const auto more = layout_checks(config);
        checks.insert(checks.end(), more.begin(), more.end());
    }
    return checks;
}

} // namespace hexakin
