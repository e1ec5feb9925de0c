#include "hexakin/fk_solver.hpp"

#include <algorithm>
#include <cmath>

#include "hexakin/angles.hpp"
#include "hexakin/errors.hpp"

namespace hexakin {

namespace {

constexpr double kDegenerateLegMm = 1e-9;
constexpr double kStrokeSlackMm = 1e-9;

RotationMatrix rot_z(double deg) { return axis_rotation(Axis::Z, deg); }
RotationMatrix rot_x(double deg) { return axis_rotation(Axis::X, deg); }

/// Per-leg solve context: targets fixed for the whole search.
struct LegTarget {
    Vec3 grip;           // target grip center, world
    Vec3 joint;          // target platform joint, world
    RotationMatrix r07;  // target orientation of frames {7}/{8}
    double theta1 = 0.0; // fixed base angle of this leg, degrees
};

LegTarget make_target(const Pose& pose, int leg, const JointLayout& layout,
                      const MachineConfig& config) {
    const RotationMatrix r = combined_rotation(pose);
    LegTarget t;
    t.grip = Vec3(pose.dx, pose.dy, pose.dz);
    const Vec3 center = t.grip - r.col(2) * config.grip_offset;
    t.joint = center + r * layout.platform_joint_of_leg(leg - 1);
    // Frame {7} x axis points from the platform joint toward the platform
    // center, z along the platform z axis; row 8's (c, 0, d) translation then
    // lands exactly on the grip center.
    t.r07 = r * rot_z(layout.platform_angle_of_leg(leg - 1) + 180.0);
    t.theta1 = wrap_deg_360(config.theta1_values[static_cast<size_t>(leg - 1)]);
    return t;
}

/// One search variable: lattice anchored at lo; circular when the bounds span
/// a full turn.
struct VarSpec {
    double lo = 0.0;
    double hi = 0.0;
    bool circular = false;

    static VarSpec from(const AngleBounds& b) {
        return VarSpec{b.min, b.max, b.max - b.min >= 360.0 - 1e-9};
    }

    double clampwrap(double v) const {
        if (circular) {
            double w = std::fmod(v - lo, 360.0);
            if (w < 0.0) w += 360.0;
            return lo + w;
        }
        return std::clamp(v, lo, hi);
    }

    std::size_t lattice_size(double step) const {
        if (circular) return static_cast<std::size_t>(std::floor(360.0 / step - 1e-9)) + 1;
        return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    }

    double lattice_value(std::size_t idx, double step) const { return lo + static_cast<double>(idx) * step; }

    std::size_t nearest_index(double v, double step) const {
        const double w = clampwrap(v);
        const auto idx = static_cast<long long>(std::llround((w - lo) / step));
        const auto n = static_cast<long long>(lattice_size(step));
        return static_cast<std::size_t>(std::clamp(idx, 0LL, n - 1));
    }
};

/// Refinement step schedule: coarse, then halving clamped at fine.
std::vector<double> step_schedule(const SearchParams& p) {
    std::vector<double> steps{p.coarse_step};
    double s = p.coarse_step;
    int refinements = 0;
    while (s > p.fine_step && refinements < p.max_refinements) {
        s = std::max(s / 2.0, p.fine_step);
        steps.push_back(s);
        ++refinements;
    }
    return steps;
}

/// Candidate offsets scanned around the incumbent at each refinement level.
constexpr int kWindow = 2;

/// U-joint angles and d4 fixed: platform-joint position of the partial chain.
/// Closed form of rows 1-5 applied to the origin (theta5 does not move it).
Vec3 partial_joint_position(const LegTarget& t, const MachineConfig& config, double theta2,
                            double theta3, double d4) {
    const double c2 = std::cos(deg_to_rad(theta2)), s2 = std::sin(deg_to_rad(theta2));
    const double c3 = std::cos(deg_to_rad(theta3)), s3 = std::sin(deg_to_rad(theta3));
    const double c1 = std::cos(deg_to_rad(t.theta1)), s1 = std::sin(deg_to_rad(t.theta1));
    const double x = config.base_joint_radius + d4 * s3 * c2;
    const double y = d4 * c3;
    const double z = d4 * s3 * s2;
    return Vec3(c1 * x - s1 * y, s1 * x + c1 * y, z + config.base_center_height);
}

double position_objective(const LegTarget& t, const MachineConfig& config, double theta2,
                          double theta3, double d4) {
    return (partial_joint_position(t, config, theta2, theta3, d4) - t.joint).norm();
}

RotationMatrix wrist_rotation(double theta5, double theta6, double theta7) {
    static const RotationMatrix x90 = rot_x(90.0);
    return rot_z(theta5) * x90 * rot_z(theta6) * x90 * rot_z(theta7);
}

/// R04 of the chain: rows 1-4 rotation.
RotationMatrix rotation_to_frame4(double theta1, double theta2, double theta3) {
    static const RotationMatrix x90 = rot_x(90.0);
    return rot_z(theta1) * x90 * rot_z(theta2) * x90 * rot_z(theta3) * x90 * rot_z(-90.0);
}

struct Incumbent {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double score = std::numeric_limits<double>::infinity();
};

/// Deterministic 2-D lattice scan + windowed halving refinement, minimizing
/// fn(a, b). Ascending scan order; strict-improvement updates keep the first
/// minimizer on ties.
template <typename Fn>
Incumbent search_2d(const VarSpec& va, const VarSpec& vb, const SearchParams& p,
                    std::optional<std::pair<double, double>> window_center, Fn&& fn,
                    std::uint64_t& evals) {
    Incumbent best;
    const double coarse = p.coarse_step;
    auto consider = [&](double a, double b) {
        const double s = fn(a, b);
        ++evals;
        if (s < best.score) best = {a, b, 0.0, s};
    };

    if (window_center) {
        const std::size_t ia = va.nearest_index(window_center->first, coarse);
        const std::size_t ib = vb.nearest_index(window_center->second, coarse);
        for (int da = -kWindow; da <= kWindow; ++da)
            for (int db = -kWindow; db <= kWindow; ++db)
                consider(va.clampwrap(va.lattice_value(ia, coarse) + da * coarse),
                         vb.clampwrap(vb.lattice_value(ib, coarse) + db * coarse));
    } else {
        const std::size_t na = va.lattice_size(coarse), nb = vb.lattice_size(coarse);
        for (std::size_t ia = 0; ia < na; ++ia)
            for (std::size_t ib = 0; ib < nb; ++ib)
                consider(va.lattice_value(ia, coarse), vb.lattice_value(ib, coarse));
    }

    const auto steps = step_schedule(p);
    for (std::size_t level = 1; level < steps.size(); ++level) {
        const double s = steps[level];
        const Incumbent center = best;
        for (int da = -kWindow; da <= kWindow; ++da)
            for (int db = -kWindow; db <= kWindow; ++db) {
                if (da == 0 && db == 0) continue;
                consider(va.clampwrap(center.v0 + da * s), vb.clampwrap(center.v1 + db * s));
            }
    }
    return best;
}

/// Coarse full-lattice wrist scan maximizing tr(R47^T M), i.e. minimizing the
/// orientation angle. Factored so the innermost loop is four flops.
Incumbent wrist_coarse_full(const VarSpec& v5, const VarSpec& v6, const VarSpec& v7,
                            double coarse, const RotationMatrix& m, std::uint64_t& evals) {
    static const RotationMatrix x90t = rot_x(90.0).transpose();
    const std::size_t n5 = v5.lattice_size(coarse);
    const std::size_t n6 = v6.lattice_size(coarse);
    const std::size_t n7 = v7.lattice_size(coarse);

    std::vector<double> c7(n7), s7(n7);
    for (std::size_t i = 0; i < n7; ++i) {
        const double t = deg_to_rad(v7.lattice_value(i, coarse));
        c7[i] = std::cos(t);
        s7[i] = std::sin(t);
    }

    Incumbent best;
    best.score = -std::numeric_limits<double>::infinity();
    for (std::size_t i5 = 0; i5 < n5; ++i5) {
        const double th5 = v5.lattice_value(i5, coarse);
        const RotationMatrix c = x90t * rot_z(-th5) * m;
        for (std::size_t i6 = 0; i6 < n6; ++i6) {
            const double th6 = v6.lattice_value(i6, coarse);
            const RotationMatrix d = x90t * rot_z(-th6) * c;
            const double k0 = d(0, 0) + d(1, 1);
            const double k1 = d(1, 0) - d(0, 1);
            const double k2 = d(2, 2);
            for (std::size_t i7 = 0; i7 < n7; ++i7) {
                const double trace = c7[i7] * k0 + s7[i7] * k1 + k2;
                ++evals;
                if (trace > best.score)
                    best = {th5, th6, v7.lattice_value(i7, coarse), trace};
            }
        }
    }
    return best;
}

struct WristResult {
    double theta5 = 0.0, theta6 = 0.0, theta7 = 0.0;
    double orientation_deg = std::numeric_limits<double>::infinity();
};

/// Wrist search minimizing the orientation residual against target M.
WristResult search_wrist(const SearchParams& p, const RotationMatrix& m,
                         std::optional<std::array<double, 3>> window_center,
                         std::uint64_t& evals) {
    const VarSpec v5 = VarSpec::from(p.theta5_bounds);
    const VarSpec v6 = VarSpec::from(p.theta6_bounds);
    const VarSpec v7 = VarSpec::from(p.theta7_bounds);

    auto angle_to_m = [&](double t5, double t6, double t7) {
        ++evals;
        return rotation_angle_between_deg(wrist_rotation(t5, t6, t7), m);
    };

    Incumbent best;
    if (window_center) {
        const double coarse = p.coarse_step;
        const std::size_t i5 = v5.nearest_index((*window_center)[0], coarse);
        const std::size_t i6 = v6.nearest_index((*window_center)[1], coarse);
        const std::size_t i7 = v7.nearest_index((*window_center)[2], coarse);
        for (int a = -kWindow; a <= kWindow; ++a)
            for (int b = -kWindow; b <= kWindow; ++b)
                for (int c = -kWindow; c <= kWindow; ++c) {
                    const double t5 = v5.clampwrap(v5.lattice_value(i5, coarse) + a * coarse);
                    const double t6 = v6.clampwrap(v6.lattice_value(i6, coarse) + b * coarse);
                    const double t7 = v7.clampwrap(v7.lattice_value(i7, coarse) + c * coarse);
                    const double s = angle_to_m(t5, t6, t7);
                    if (s < best.score) best = {t5, t6, t7, s};
                }
    } else {
        const Incumbent coarse_best =
            wrist_coarse_full(v5, v6, v7, p.coarse_step, m, evals);
        best = {coarse_best.v0, coarse_best.v1, coarse_best.v2,
                angle_to_m(coarse_best.v0, coarse_best.v1, coarse_best.v2)};
    }

    const auto steps = step_schedule(p);
    for (std::size_t level = 1; level < steps.size(); ++level) {
        const double s = steps[level];
        const Incumbent center = best;
        for (int a = -kWindow; a <= kWindow; ++a)
            for (int b = -kWindow; b <= kWindow; ++b)
                for (int c = -kWindow; c <= kWindow; ++c) {
                    if (a == 0 && b == 0 && c == 0) continue;
                    const double t5 = v5.clampwrap(center.v0 + a * s);
                    const double t6 = v6.clampwrap(center.v1 + b * s);
                    const double t7 = v7.clampwrap(center.v2 + c * s);
                    const double sc = angle_to_m(t5, t6, t7);
                    if (sc < best.score) best = {t5, t6, t7, sc};
                }
    }
    return {best.v0, best.v1, best.v2, best.score};
}

} // namespace

std::pair<double, double> seed_angles(const Pose& target_pose, int leg, const JointLayout& layout,
                                      const MachineConfig& config) {
    const LegTarget t = make_target(target_pose, leg, layout, config);
    // Leg vector expressed in the frame-1 basis (base frame rotated by theta1):
    // w = (d4 s3 c2, d4 c3, d4 s3 s2).
    const Vec3 w = rot_z(-t.theta1) * (t.joint - Vec3(0.0, 0.0, config.base_center_height)) -
                   Vec3(config.base_joint_radius, 0.0, 0.0);
    const double d4 = w.norm();
    if (d4 < kDegenerateLegMm) throw DegenerateLeg("seed_angles: zero-length leg");
    // sin(theta3) <= 0 branch keeps the solutions in the observed envelope.
    const double theta3 = -rad_to_deg(std::acos(std::clamp(w.y() / d4, -1.0, 1.0)));
    const double s3 = std::sin(deg_to_rad(theta3));
    double theta2 = 0.0;
    if (std::abs(s3) > 1e-12) theta2 = rad_to_deg(std::atan2(w.z() / s3, w.x() / s3));
    return {theta2, theta3};
}

std::vector<std::array<double, 3>> wrist_seeds(const Pose& target_pose, int leg, double theta2,
                                               double theta3, const JointLayout& layout,
                                               const MachineConfig& config) {
    const LegTarget t = make_target(target_pose, leg, layout, config);
    const RotationMatrix r04 = rotation_to_frame4(t.theta1, theta2, theta3);
    const RotationMatrix m = r04.transpose() * t.r07;

    // R47 = Rz(t5) Rx(90) Rz(t6) Rx(90) Rz(t7) = Rz(t5) Ry(-t6) Rz(-t7) Rx(180),
    // so N = M Rx(180) factors as a ZYZ Euler triple (t5, -t6, -t7).
    const RotationMatrix n = m * rot_x(180.0);
    const double st = std::hypot(n(0, 2), n(1, 2));

    std::vector<std::array<double, 3>> seeds;
    auto push = [&](double phi_rad, double tht_rad, double psi_rad) {
        seeds.push_back({wrap_deg_360(rad_to_deg(phi_rad)), wrap_deg_360(-rad_to_deg(tht_rad)),
                         wrap_deg_180(-rad_to_deg(psi_rad))});
    };
    if (st < 1e-10) {
        // Euler-degenerate: only phi +- psi is determined; put it all in phi.
        const double tht = n(2, 2) > 0.0 ? 0.0 : deg_to_rad(180.0);
        push(std::atan2(n(1, 0), n(0, 0)), tht, 0.0);
    } else {
        const double tht = std::atan2(st, n(2, 2));
        const double phi = std::atan2(n(1, 2), n(0, 2));
        const double psi = std::atan2(n(2, 1), -n(2, 0));
        push(phi, tht, psi);
        push(phi + deg_to_rad(180.0), -tht, psi + deg_to_rad(180.0));
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return seeds;
}

PositionSearch search_leg_position(const Pose& target_pose, int leg, double d4,
                                   const JointLayout& layout, const MachineConfig& config,
                                   const SearchParams& params) {
    const LegTarget t = make_target(target_pose, leg, layout, config);
    const VarSpec v2 = VarSpec::from(params.theta2_bounds);
    const VarSpec v3 = VarSpec::from(params.theta3_bounds);

    std::optional<std::pair<double, double>> window;
    if (params.warm_start) window = seed_angles(target_pose, leg, layout, config);

    PositionSearch out;
    const Incumbent best = search_2d(
        v2, v3, params, window,
        [&](double a, double b) { return position_objective(t, config, a, b, d4); },
        out.evaluations);
    out.theta2 = best.v0;
    out.theta3 = best.v1;
    out.joint_error_mm = best.score;
    return out;
}

LegRecovery recover_leg(const Pose& target_pose, int leg, double leg_length,
                        const JointLayout& layout, const MachineConfig& config,
                        const SearchParams& params) {
    if (!(params.fine_step > 0.0) || params.fine_step > params.coarse_step)
        throw ValidationError("SearchParams: need 0 < fine_step <= coarse_step");
    if (!(params.error_limit > 0.0))
        throw ValidationError("SearchParams: error_limit must be positive");

    LegRecovery out;
    if (leg_length < config.actuator_min_length - kStrokeSlackMm ||
        leg_length > config.actuator_max_length() + kStrokeSlackMm)
        return out; // infeasible actuator length: unsolved by definition

    const LegTarget t = make_target(target_pose, leg, layout, config);
    const double d4 = leg_length;
    const VarSpec v2 = VarSpec::from(params.theta2_bounds);
    const VarSpec v3 = VarSpec::from(params.theta3_bounds);

    // Stage 1: theta2/theta3 position the leg top onto the platform joint.
    PositionSearch pos_search;
    try {
        pos_search = search_leg_position(target_pose, leg, d4, layout, config, params);
    } catch (const DegenerateLeg&) {
        return out;
    }
    out.evaluations += pos_search.evaluations;
    const Incumbent pos{pos_search.theta2, pos_search.theta3, 0.0, pos_search.joint_error_mm};

    // Stage 2: theta5/theta6/theta7 align the wrist with the target
    // orientation.
    const RotationMatrix r04 = rotation_to_frame4(t.theta1, pos.v0, pos.v1);
    const RotationMatrix m = r04.transpose() * t.r07;
    std::vector<std::optional<std::array<double, 3>>> wrist_starts;
    if (params.warm_start) {
        const auto seeds = wrist_seeds(target_pose, leg, pos.v0, pos.v1, layout, config);
        for (const auto& s : seeds) {
            if (s[0] >= params.theta5_bounds.min - params.coarse_step &&
                s[0] <= params.theta5_bounds.max + params.coarse_step)
                wrist_starts.emplace_back(s);
        }
        // Out-of-band seeds are still better than nothing.
        if (wrist_starts.empty())
            for (const auto& s : seeds) wrist_starts.emplace_back(s);
    } else {
        wrist_starts.emplace_back(std::nullopt);
    }

    // Stage 3 per start: fine-step coordinate polish of all five angles on
    // the grip position error; first start meeting the limit wins.
    const VarSpec v5 = VarSpec::from(params.theta5_bounds);
    const VarSpec v6 = VarSpec::from(params.theta6_bounds);
    const VarSpec v7 = VarSpec::from(params.theta7_bounds);
    const std::array<const VarSpec*, 5> specs{&v2, &v3, &v5, &v6, &v7};

    LegSolution best_sol;
    double best_err = std::numeric_limits<double>::infinity();
    double best_orient = std::numeric_limits<double>::infinity();

    for (const auto& start : wrist_starts) {
        const WristResult w = search_wrist(params, m, start, out.evaluations);

        std::array<double, 5> q{pos.v0, pos.v1, w.theta5, w.theta6, w.theta7};
        auto grip_err = [&](const std::array<double, 5>& v) {
            ++out.evaluations;
            LegSolution s{leg, v[0], v[1], d4, v[2], v[3], v[4]};
            return (chain_grip_position(build_leg_table(leg, s, config)) - t.grip).norm();
        };
        double err = grip_err(q);
        for (int sweep = 0; sweep < params.max_polish_sweeps; ++sweep) {
            if (err < params.error_limit * 0.25) break;
            bool improved = false;
            for (std::size_t k = 0; k < q.size(); ++k) {
                for (const double delta : {params.fine_step, -params.fine_step}) {
                    std::array<double, 5> cand = q;
                    cand[k] = specs[k]->clampwrap(cand[k] + delta);
                    const double e = grip_err(cand);
                    if (e < err) {
                        q = cand;
                        err = e;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }

        if (err < best_err) {
            best_err = err;
            best_sol = LegSolution{leg, q[0], q[1], d4, wrap_deg_360(q[2]), wrap_deg_360(q[3]),
                                   wrap_deg_180(q[4])};
            best_orient = rotation_angle_between_deg(
                chain_pose(build_leg_table(leg, best_sol, config)).block<3, 3>(0, 0), t.r07);
        }
        if (best_err <= params.error_limit) break; // ascending-theta5 first hit
    }

    out.residual_mm = best_err;
    out.orientation_residual_deg = best_orient;
    if (best_err <= params.error_limit) out.solution = best_sol;
    return out;
}

FkResult recover_pose(const WorkspaceRecord& record, const JointLayout& layout,
                      const MachineConfig& config, const SearchParams& params) {
    FkResult result;
    result.pose_id = record.pose_id;
    result.pose = record.pose;
    for (int leg = 1; leg <= 6; ++leg) {
        LegRecovery r = recover_leg(record.pose, leg, record.leg_lengths[static_cast<size_t>(leg - 1)],
                                    layout, config, params);
        result.solutions[static_cast<size_t>(leg - 1)] = r.solution;
        result.residual_mm[static_cast<size_t>(leg - 1)] = r.residual_mm;
        result.orientation_residual_deg[static_cast<size_t>(leg - 1)] = r.orientation_residual_deg;
        result.evaluations += r.evaluations;
    }
    return result;
}

std::vector<NearestHit> fk_lookup(const std::array<double, 6>& lengths, const WorkspaceDb& db,
                                  std::size_t k) {
    return nearest_by_lengths(db, lengths, k);
}

} // namespace hexakin
