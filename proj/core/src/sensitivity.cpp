#include "hexakin/sensitivity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hexakin/errors.hpp"
#include "hexakin/rng.hpp"

namespace hexakin {

LegSolution perturb(const LegSolution& solution, const ToleranceBand& band,
                    const Direction& direction) {
    LegSolution s = solution;
    s.theta2 += band.magnitude * direction[0];
    s.theta3 += band.magnitude * direction[1];
    s.d4 += band.magnitude * direction[2];
    s.theta5 += band.magnitude * direction[3];
    s.theta6 += band.magnitude * direction[4];
    s.theta7 += band.magnitude * direction[5];
    return s;
}

DeviationRecord deviation(const Pose& nominal_pose, const std::array<LegSolution, 6>& perturbed,
                          const MachineConfig& config) {
    const Vec3 nominal(nominal_pose.dx, nominal_pose.dy, nominal_pose.dz);
    Vec3 worst = Vec3::Zero();
    double worst_dist = -1.0;
    for (const auto& leg : perturbed) {
        const Vec3 dev = chain_grip_position(build_leg_table(leg.leg_index, leg, config)) - nominal;
        const double dist = dev.norm();
        if (dist > worst_dist) {
            worst_dist = dist;
            worst = dev;
        }
    }
    DeviationRecord rec;
    rec.dev_x = std::abs(worst.x());
    rec.dev_y = std::abs(worst.y());
    rec.dev_z = std::abs(worst.z());
    rec.dev_dist = worst.norm();
    return rec;
}

namespace {

struct DirectionSample {
    SampleKind kind = SampleKind::corner;
    int index = 0;
    std::array<Direction, 6> per_leg{}; // corners repeat one pattern six times
};

std::vector<DirectionSample> make_directions(std::size_t n_random, std::uint64_t seed) {
    std::vector<DirectionSample> out;
    out.reserve(64 + n_random);
    for (int k = 0; k < 64; ++k) {
        DirectionSample s;
        s.kind = SampleKind::corner;
        s.index = k;
        Direction d{};
        for (int j = 0; j < 6; ++j) d[static_cast<size_t>(j)] = ((k >> j) & 1) ? 1.0 : -1.0;
        s.per_leg.fill(d);
        out.push_back(s);
    }
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n_random; ++k) {
        DirectionSample s;
        s.kind = SampleKind::random;
        s.index = static_cast<int>(k);
        for (auto& d : s.per_leg)
            for (auto& v : d) v = uniform_symmetric(rng);
        out.push_back(s);
    }
    return out;
}

} // namespace

SweepReport sweep(const std::vector<SolvedPose>& poses, const std::vector<double>& bands,
                  std::size_t n_random, std::uint64_t seed, const MachineConfig& config) {
    if (poses.empty()) throw EmptyDatabase("sensitivity sweep: no solved poses");

    const auto directions = make_directions(n_random, seed);
    SweepReport report;
    report.pose_count = poses.size();
    report.corner_directions = 64;
    report.random_directions = n_random;
    report.seed = seed;

    for (const double band : bands) {
        BandReport br;
        br.band = band;
        const ToleranceBand tb{band};

        struct Extreme {
            double value = 0.0;
            bool initialized = false;
            DeviationRecord record;
        };
        // x-max, x-min, y-max, y-min, z-max, z-min
        std::array<Extreme, 6> extremes{};
        double sum_dist = 0.0;
        std::uint64_t samples = 0;

        for (const auto& sp : poses) {
            for (const auto& dir : directions) {
                std::array<LegSolution, 6> perturbed{};
                for (int leg = 0; leg < 6; ++leg)
                    perturbed[static_cast<size_t>(leg)] =
                        perturb(sp.legs[static_cast<size_t>(leg)], tb, dir.per_leg[static_cast<size_t>(leg)]);
                DeviationRecord rec = deviation(sp.pose, perturbed, config);
                rec.pose_id = sp.pose_id;
                rec.band = tb;
                rec.kind = dir.kind;
                rec.direction_index = dir.index;

                const std::array<double, 3> comp{rec.dev_x, rec.dev_y, rec.dev_z};
                for (int axis = 0; axis < 3; ++axis) {
                    auto& hi = extremes[static_cast<size_t>(2 * axis)];
                    auto& lo = extremes[static_cast<size_t>(2 * axis + 1)];
                    if (!hi.initialized || comp[static_cast<size_t>(axis)] > hi.value) {
                        hi = {comp[static_cast<size_t>(axis)], true, rec};
                    }
                    if (!lo.initialized || comp[static_cast<size_t>(axis)] < lo.value) {
                        lo = {comp[static_cast<size_t>(axis)], true, rec};
                    }
                }
                if (rec.dev_dist > br.max_dev_dist) {
                    br.max_dev_dist = rec.dev_dist;
                    br.max_pose_id = rec.pose_id;
                }
                sum_dist += rec.dev_dist;
                ++samples;
            }
        }

        static const char* kStatNames[6] = {"x-max", "x-min", "y-max", "y-min", "z-max", "z-min"};
        for (int i = 0; i < 6; ++i)
            br.stats[static_cast<size_t>(i)] = {kStatNames[i], extremes[static_cast<size_t>(i)].record};
        br.mean_dev_dist = samples > 0 ? sum_dist / static_cast<double>(samples) : 0.0;
        report.bands.push_back(std::move(br));
    }
    return report;
}

namespace {

std::string sample_label(const DeviationRecord& rec) {
    return (rec.kind == SampleKind::corner ? "corner:" : "random:") +
           std::to_string(rec.direction_index);
}

} // namespace

void write_sensitivity_report(const SweepReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "band,stat,at,dev_x,dev_y,dev_z,dev_dist,pose_id\n";
    char buf[256];
    for (const auto& band : report.bands) {
        for (const auto& stat : band.stats) {
            const auto& r = stat.record;
            std::snprintf(buf, sizeof(buf), "%.6f,%s,%s,%.6f,%.6f,%.6f,%.6f,%llu\n", band.band,
                          stat.stat.c_str(), sample_label(r).c_str(), r.dev_x, r.dev_y, r.dev_z,
                          r.dev_dist, static_cast<unsigned long long>(r.pose_id));
            out << buf;
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_sensitivity_summary(const SweepReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "band,max_dev_dist,mean_dev_dist\n";
    char buf[128];
    for (const auto& band : report.bands) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", band.band, band.max_dev_dist,
                      band.mean_dev_dist);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace hexakin
