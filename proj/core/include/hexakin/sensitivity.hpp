#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hexakin/dh.hpp"
#include "hexakin/pose.hpp"
#include "hexakin/store.hpp"

namespace hexakin {

/// Symmetric tolerance applied to every solved DH variable: +- magnitude in
/// degrees for the joint angles and in mm for d4.
struct ToleranceBand {
    double magnitude = 0.0;
};

enum class SampleKind { corner, random };

/// Per-variable perturbation weights in [-1, 1], ordered
/// (theta2, theta3, d4, theta5, theta6, theta7).
using Direction = std::array<double, 6>;

/// Grip-center deviation of one perturbed pose sample. Components are the
/// absolute deviations of the worst leg's chain prediction, so dev_dist is
/// exactly the Euclidean norm of (dev_x, dev_y, dev_z).
struct DeviationRecord {
    std::uint64_t pose_id = 0;
    double dev_x = 0.0;
    double dev_y = 0.0;
    double dev_z = 0.0;
    double dev_dist = 0.0;
    ToleranceBand band;
    SampleKind kind = SampleKind::corner;
    int direction_index = 0;
};

/// Shift each solution variable by band.magnitude * direction component.
LegSolution perturb(const LegSolution& solution, const ToleranceBand& band,
                    const Direction& direction);

/// Evaluate each perturbed leg's chain and report the worst leg's grip-center
/// deviation from the nominal pose position.
DeviationRecord deviation(const Pose& nominal_pose, const std::array<LegSolution, 6>& perturbed,
                          const MachineConfig& config);

/// One Table-6-style row: the sample attaining the extreme of one component.
struct BandStat {
    std::string stat; // x-max, x-min, y-max, y-min, z-max, z-min
    DeviationRecord record;
};

struct BandReport {
    double band = 0.0;
    std::array<BandStat, 6> stats{};
    double max_dev_dist = 0.0;
    double mean_dev_dist = 0.0;
    std::uint64_t max_pose_id = 0;
};

struct SweepReport {
    std::vector<BandReport> bands;
    std::size_t pose_count = 0;
    std::size_t corner_directions = 0;
    std::size_t random_directions = 0;
    std::uint64_t seed = 0;
};

/// For each band, evaluate the 64 shared-sign corner directions (one sign
/// pattern applied to all six legs) plus n_random seeded directions drawn
/// independently per leg. The direction set is generated once and reused for
/// every band. Throws EmptyDatabase when no solved poses are given.
SweepReport sweep(const std::vector<SolvedPose>& poses, const std::vector<double>& bands,
                  std::size_t n_random, std::uint64_t seed, const MachineConfig& config);

/// Table-6-shaped rows: band,stat,at,dev_x,dev_y,dev_z,dev_dist,pose_id.
void write_sensitivity_report(const SweepReport& report, const std::string& path);

/// Max/mean grip deviation per band: band,max_dev_dist,mean_dev_dist.
void write_sensitivity_summary(const SweepReport& report, const std::string& path);

} // namespace hexakin
