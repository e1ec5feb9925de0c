#include "hexakin/machine_config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hexakin/angles.hpp"
#include "hexakin/errors.hpp"

namespace hexakin {

namespace {

constexpr double kClosureTolDeg = 0.5;

struct LengthField {
    const char* name;
    double MachineConfig::* member;
};

constexpr LengthField kLengthFields[] = {
    {"base_joint_radius", &MachineConfig::base_joint_radius},
    {"base_small_side", &MachineConfig::base_small_side},
    {"base_large_side", &MachineConfig::base_large_side},
    {"platform_joint_radius", &MachineConfig::platform_joint_radius},
    {"platform_small_side", &MachineConfig::platform_small_side},
    {"platform_large_side", &MachineConfig::platform_large_side},
    {"actuator_min_length", &MachineConfig::actuator_min_length},
    {"actuator_stroke", &MachineConfig::actuator_stroke},
    {"base_center_height", &MachineConfig::base_center_height},
    {"grip_offset", &MachineConfig::grip_offset},
    {"home_height", &MachineConfig::home_height},
};

} // namespace

double hexagon_closure_deg(double radius, double small_side, double large_side) {
    const double hs = std::asin(small_side / (2.0 * radius));
    const double hl = std::asin(large_side / (2.0 * radius));
    return rad_to_deg(3.0 * (2.0 * hs + 2.0 * hl));
}

std::vector<GeometryCheck> validate_config(const MachineConfig& c) {
    std::vector<GeometryCheck> checks;

    double worst = 0.0;
    std::string worst_name;
    for (const auto& f : kLengthFields) {
        const double v = c.*(f.member);
        if (!(v > 0.0) || !std::isfinite(v)) {
            if (worst_name.empty()) worst_name = f.name;
            worst = std::min(worst, v);
        }
    }
    checks.push_back({"positive_lengths", worst_name.empty(), worst,
                      worst_name.empty() ? "" : "non-positive field: " + worst_name});

    auto chord_check = [&](const char* name, double radius, double side) {
        const double excess = side - 2.0 * radius;
        checks.push_back({name, excess < 0.0, excess,
                          excess < 0.0 ? "" : "chord exceeds diameter"});
    };
    chord_check("base_small_chord_fits_circle", c.base_joint_radius, c.base_small_side);
    chord_check("base_large_chord_fits_circle", c.base_joint_radius, c.base_large_side);
    chord_check("platform_small_chord_fits_circle", c.platform_joint_radius, c.platform_small_side);
    chord_check("platform_large_chord_fits_circle", c.platform_joint_radius, c.platform_large_side);

    auto closure_check = [&](const char* name, double radius, double small, double large,
                             bool chords_ok) {
        if (!chords_ok || !(radius > 0.0)) {
            checks.push_back({name, false, std::nan(""), "closure undefined: invalid chords"});
            return;
        }
        const double sum = hexagon_closure_deg(radius, small, large);
        const double residual = sum - 360.0;
        checks.push_back({name, std::abs(residual) <= kClosureTolDeg, residual, ""});
    };
    closure_check("base_hexagon_closure", c.base_joint_radius, c.base_small_side,
                  c.base_large_side, checks[1].passed && checks[2].passed);
    closure_check("platform_hexagon_closure", c.platform_joint_radius, c.platform_small_side,
                  c.platform_large_side, checks[3].passed && checks[4].passed);

    bool theta_finite = true;
    for (double t : c.theta1_values) theta_finite = theta_finite && std::isfinite(t);
    checks.push_back({"theta1_values_finite", theta_finite, 0.0, ""});

    checks.push_back({"platform_start_angle_finite", std::isfinite(c.platform_start_angle),
                      0.0, ""});

    return checks;
}

void require_valid_config(const MachineConfig& config) {
    for (const auto& check : validate_config(config)) {
        if (!check.passed) {
            std::ostringstream msg;
            msg << "config invariant failed: " << check.name;
            if (!check.detail.empty()) msg << " (" << check.detail << ")";
            msg << ", residual " << check.residual;
            throw ValidationError(msg.str());
        }
    }
}

MachineConfig load_machine_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("config " + path + ": top level must be an object");

    MachineConfig c;
    auto need_number = [&](const char* field) -> double {
        if (!j.contains(field))
            throw ParseError("config " + path + ": missing field: " + field);
        if (!j[field].is_number())
            throw ParseError("config " + path + ": field is not a number: " + std::string(field));
        return j[field].get<double>();
    };
    for (const auto& f : kLengthFields) c.*(f.member) = need_number(f.name);
    c.platform_start_angle = need_number("platform_start_angle");

    if (!j.contains("theta1_values"))
        throw ParseError("config " + path + ": missing field: theta1_values");
    const auto& tv = j["theta1_values"];
    if (!tv.is_array())
        throw ParseError("config " + path + ": theta1_values must be an array");
    if (tv.size() != 6)
        throw ValidationError("config " + path + ": theta1_values must have exactly 6 entries, got " +
                              std::to_string(tv.size()));
    for (int i = 0; i < 6; ++i) {
        if (!tv[i].is_number())
            throw ParseError("config " + path + ": theta1_values[" + std::to_string(i) +
                             "] is not a number");
        c.theta1_values[static_cast<size_t>(i)] = tv[i].get<double>();
    }

    static const char* kKnown[] = {
        "base_joint_radius", "base_small_side", "base_large_side",
        "platform_joint_radius", "platform_small_side", "platform_large_side",
        "actuator_min_length", "actuator_stroke", "base_center_height",
        "grip_offset", "home_height", "theta1_values", "platform_start_angle"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : kKnown) known = known || (it.key() == k);
        if (!known) throw ParseError("config " + path + ": unknown field: " + it.key());
    }

    require_valid_config(c);
    return c;
}

std::string canonical_config_string(const MachineConfig& c) {
    char buf[64];
    std::string out;
    auto put = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%s=%.6f;", name, v);
        out += buf;
    };
    for (const auto& f : kLengthFields) put(f.name, c.*(f.member));
    for (int i = 0; i < 6; ++i) {
        std::snprintf(buf, sizeof(buf), "theta1_%d=%.6f;", i, c.theta1_values[static_cast<size_t>(i)]);
        out += buf;
    }
    put("platform_start_angle", c.platform_start_angle);
    return out;
}

std::string config_hash(const MachineConfig& c) {
    const std::string s = canonical_config_string(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace hexakin
