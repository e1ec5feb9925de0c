#include <benchmark/benchmark.h>

#include <random>

#include "hexakin/fk_solver.hpp"
#include "hexakin/ik.hpp"
#include "hexakin/joint_layout.hpp"
#include "hexakin/machine_config.hpp"
#include "hexakin/rng.hpp"

using namespace hexakin;

namespace {

const MachineConfig& config() {
    static const MachineConfig c = load_machine_config(HEXAKIN_TIGER_CONFIG);
    return c;
}

const JointLayout& layout() {
    static const JointLayout l = build_joint_layout(config());
    return l;
}

Pose home() { return Pose{0, 0, config().home_grip_z(), 0, 0, 0}; }

WorkspaceRecord valid_record() {
    std::mt19937_64 rng(12);
    const MotionLimits lim = default_motion_limits(config());
    for (;;) {
        auto pick = [&](const Range& r) {
            return r.first + uniform_unit(rng) * (r.second - r.first);
        };
        const Pose pose{pick(lim.x_range),    pick(lim.y_range),     pick(lim.z_range),
                        pick(lim.roll_range), pick(lim.pitch_range), pick(lim.yaw_range)};
        PoseValidity v = pose_valid(pose, layout(), config());
        if (v.valid()) return v.record;
    }
}

} // namespace

static void BM_LegLengths(benchmark::State& state) {
    const Pose pose = home();
    for (auto _ : state)
        benchmark::DoNotOptimize(leg_lengths(pose, layout(), config()));
}
BENCHMARK(BM_LegLengths);

static void BM_ForceJacobianDet(benchmark::State& state) {
    const Pose pose = home();
    for (auto _ : state)
        benchmark::DoNotOptimize(force_jacobian(pose, layout(), config()).determinant());
}
BENCHMARK(BM_ForceJacobianDet);

static void BM_PoseValid(benchmark::State& state) {
    const Pose pose = home();
    for (auto _ : state)
        benchmark::DoNotOptimize(pose_valid(pose, layout(), config()).valid());
}
BENCHMARK(BM_PoseValid);

static void BM_ChainPose(benchmark::State& state) {
    const LegSolution sol{1, -60.0, -85.0, 550.0, 170.0, 200.0, -150.0};
    const LegDhTable table = build_leg_table(1, sol, config());
    for (auto _ : state)
        benchmark::DoNotOptimize(chain_pose(table));
}
BENCHMARK(BM_ChainPose);

static void BM_RecoverLegWarm(benchmark::State& state) {
    const WorkspaceRecord rec = valid_record();
    const SearchParams params;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            recover_leg(rec.pose, 1, rec.leg_lengths[0], layout(), config(), params));
}
BENCHMARK(BM_RecoverLegWarm);

static void BM_RecoverPoseWarm(benchmark::State& state) {
    const WorkspaceRecord rec = valid_record();
    const SearchParams params;
    for (auto _ : state)
        benchmark::DoNotOptimize(recover_pose(rec, layout(), config(), params));
}
BENCHMARK(BM_RecoverPoseWarm);

static void BM_WorkspaceChunk(benchmark::State& state) {
    // One z/rotation slab of the production grid.
    MotionLimits lim = default_motion_limits(config());
    lim.z_range = {lim.z_range.first, lim.z_range.first};
    lim.roll_range = {0.0, 0.0};
    lim.pitch_range = {0.0, 0.0};
    lim.yaw_range = {0.0, 0.0};
    for (auto _ : state) {
        auto result = generate_workspace(layout(), config(), lim, GridSteps{15, 10, 10}, 1e-6, 1);
        benchmark::DoNotOptimize(result.records.size());
    }
}
BENCHMARK(BM_WorkspaceChunk);

BENCHMARK_MAIN();
