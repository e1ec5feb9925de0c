#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hexakin/dh.hpp"
#include "hexakin/ik.hpp"
#include "hexakin/machine_config.hpp"

namespace hexakin {

/// Sidecar metadata persisted as <stem>.meta.json next to every database.
struct DatabaseMeta {
    std::string config_hash;
    MotionLimits limits{};
    GridSteps steps{};
    double threshold = kDefaultSingularityThreshold;
    std::optional<std::uint64_t> seed;
    std::string tool_version;
    std::string created_utc;
    std::optional<std::string> source_workspace; // DH databases: workspace file they were solved from
};

struct WorkspaceDb {
    std::vector<WorkspaceRecord> records; // ascending pose_id
    DatabaseMeta meta;
};

/// One CSV row of a DH database; six rows per pose. Unsolved legs keep zeroed
/// variables and solved = false.
struct DhRecord {
    std::uint64_t pose_id = 0;
    int leg = 1;
    LegSolution solution;
    double residual_mm = 0.0;
    bool solved = false;
};

struct DhDb {
    std::vector<DhRecord> rows; // ascending (pose_id, leg)
    DatabaseMeta meta;
};

/// foo/bar.csv -> foo/bar.meta.json
std::string sidecar_meta_path(const std::string& csv_path);

/// ISO-8601 UTC; honors SOURCE_DATE_EPOCH for reproducible output.
std::string current_utc_timestamp();

void write_workspace(const WorkspaceDb& db, const std::string& path);
WorkspaceDb read_workspace(const std::string& path);
/// Rejects files whose metadata hash differs from config_hash(config).
WorkspaceDb read_workspace(const std::string& path, const MachineConfig& config);

void write_dh(const DhDb& db, const std::string& path);
DhDb read_dh(const std::string& path);
DhDb read_dh(const std::string& path, const MachineConfig& config);

/// Seeded uniform sample of n records without replacement, returned in
/// ascending pose_id order. Throws InsufficientRecords when n exceeds the
/// record count.
std::vector<WorkspaceRecord> sample_poses(const WorkspaceDb& db, std::size_t n, std::uint64_t seed);

struct NearestHit {
    WorkspaceRecord record;
    double distance = 0.0;
};

/// Exact k-nearest records under 6-D Euclidean length distance via linear
/// scan, ascending distance, ties broken by pose_id. Throws EmptyDatabase.
std::vector<NearestHit> nearest_by_lengths(const WorkspaceDb& db,
                                           const std::array<double, 6>& lengths, std::size_t k);

/// A fully solved pose: the workspace pose joined with its six leg solutions.
struct SolvedPose {
    std::uint64_t pose_id = 0;
    Pose pose;
    std::array<LegSolution, 6> legs{};
    std::array<double, 6> residual_mm{};
};

/// Join DH rows with their workspace poses; keeps only poses where all six
/// legs solved. Throws ValidationError on orphan DH records (referential
/// integrity).
std::vector<SolvedPose> join_solved(const WorkspaceDb& ws, const DhDb& dh);

} // namespace hexakin
