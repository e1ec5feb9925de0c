#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hexakin/angles.hpp"
#include "hexakin/errors.hpp"
#include "hexakin/ik.hpp"
#include "hexakin/rng.hpp"
#include "test_support.hpp"

using namespace hexakin;
using hexakin::test::random_pose_in_limits;
using hexakin::test::tiger_config;
using hexakin::test::tiger_home_pose;
using hexakin::test::tiger_layout;

TEST_CASE("home pose has six equal legs matching direct vector arithmetic") {
    const auto lengths = leg_lengths(tiger_home_pose(), tiger_layout(), tiger_config());
    for (int i = 1; i < 6; ++i)
        CHECK(lengths[static_cast<size_t>(i)] == doctest::Approx(lengths[0]).epsilon(1e-12));

    // Independent oracle: hand vector arithmetic on the constructed layout.
    const MachineConfig& c = tiger_config();
    const JointLayout& layout = tiger_layout();
    const Vec3 h(0.0, 0.0, c.home_height); // platform center over base center
    for (int i = 0; i < 6; ++i) {
        const Vec3 leg = h + layout.platform_joint_of_leg(i) - layout.base_joints[static_cast<size_t>(i)];
        CHECK(lengths[static_cast<size_t>(i)] == doctest::Approx(leg.norm()).epsilon(1e-12));
    }

    // Home length sits inside the observed actuator envelope.
    CHECK(lengths[0] > 465.68);
    CHECK(lengths[0] < 664.68);
    // Frozen regression value for the stock pairing.
    CHECK(lengths[0] == doctest::Approx(561.117).epsilon(1e-5));
}

TEST_CASE("raising the platform lengthens every leg") {
    Pose up = tiger_home_pose();
    up.dz += 10.0;
    const auto at_home = leg_lengths(tiger_home_pose(), tiger_layout(), tiger_config());
    const auto raised = leg_lengths(up, tiger_layout(), tiger_config());
    for (int i = 0; i < 6; ++i) CHECK(raised[static_cast<size_t>(i)] > at_home[static_cast<size_t>(i)]);
}

TEST_CASE("leg_lengths is bitwise deterministic") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const Pose p = random_pose_in_limits(rng);
        const auto a = leg_lengths(p, tiger_layout(), tiger_config());
        const auto b = leg_lengths(p, tiger_layout(), tiger_config());
        CHECK(a == b);
    }
}

TEST_CASE("transformed platform joints keep their mutual distances") {
    std::mt19937_64 rng(23);
    const JointLayout& layout = tiger_layout();
    for (int trial = 0; trial < 50; ++trial) {
        const Pose p = random_pose_in_limits(rng);
        const RotationMatrix r = combined_rotation(p);
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                const double after = (r * layout.platform_joints[static_cast<size_t>(i)] -
                                      r * layout.platform_joints[static_cast<size_t>(j)])
                                         .norm();
                const double rest = (layout.platform_joints[static_cast<size_t>(i)] -
                                     layout.platform_joints[static_cast<size_t>(j)])
                                        .norm();
                CHECK(std::abs(after - rest) < 1e-9);
            }
    }
}

TEST_CASE("force jacobian rows start with unit leg directions") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Pose p = random_pose_in_limits(rng);
        const auto jac = force_jacobian(p, tiger_layout(), tiger_config());
        for (int i = 0; i < 6; ++i)
            CHECK(jac.block<1, 3>(i, 0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("home pose is comfortably nonsingular") {
    const double det =
        force_jacobian(tiger_home_pose(), tiger_layout(), tiger_config()).determinant();
    CHECK(std::abs(det) > 1e-3);
}

TEST_CASE("determinant is continuous in the pose") {
    const Pose a = tiger_home_pose();
    Pose b = a;
    b.dx += 0.01;
    const double da = force_jacobian(a, tiger_layout(), tiger_config()).determinant();
    const double db = force_jacobian(b, tiger_layout(), tiger_config()).determinant();
    CHECK(std::abs(da - db) / std::abs(da) < 1e-3);
}

TEST_CASE("pose_valid") {
    SUBCASE("home is valid") {
        const PoseValidity v = pose_valid(tiger_home_pose(), tiger_layout(), tiger_config(), 1e-6);
        CHECK(v.valid());
        CHECK(v.reason() == "Valid");
        CHECK(v.record.leg_lengths[0] == doctest::Approx(561.117).epsilon(1e-5));
    }
    SUBCASE("unreachable height reports the violating leg") {
        Pose p = tiger_home_pose();
        p.dz += 10.0 * tiger_config().actuator_stroke;
        const PoseValidity v = pose_valid(p, tiger_layout(), tiger_config());
        CHECK(!v.valid());
        CHECK(v.kind == PoseValidity::Kind::stroke_violation);
        CHECK(v.leg >= 1);
        CHECK(v.leg <= 6);
        CHECK(v.reason().find("StrokeViolation") != std::string::npos);
    }
    SUBCASE("absurd threshold flags the home pose as singular") {
        const PoseValidity v = pose_valid(tiger_home_pose(), tiger_layout(), tiger_config(), 1e6);
        CHECK(!v.valid());
        CHECK(v.kind == PoseValidity::Kind::singular);
        CHECK(v.reason() == "Singular");
    }
}

TEST_CASE("axis_samples honors endpoints and anchoring") {
    const auto exact = axis_samples({-30.0, 30.0}, 10.0);
    CHECK(exact.size() == 7);
    CHECK(exact.front() == -30.0);
    CHECK(exact.back() == 30.0);

    // Non-multiple span: the last sample stops short of max.
    const auto short_stop = axis_samples({-158.0, 158.0}, 15.0);
    CHECK(short_stop.size() == 22);
    CHECK(short_stop.back() == doctest::Approx(157.0));

    CHECK(axis_samples({5.0, 5.0}, 1.0).size() == 1);
    CHECK_THROWS_AS(axis_samples({0.0, 1.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(axis_samples({1.0, 0.0}, 1.0), ValidationError);
}

namespace {

MotionLimits point_limits(const Pose& p) {
    MotionLimits lim;
    lim.x_range = {p.dx, p.dx};
    lim.y_range = {p.dy, p.dy};
    lim.z_range = {p.dz, p.dz};
    lim.roll_range = {p.alpha, p.alpha};
    lim.pitch_range = {p.beta, p.beta};
    lim.yaw_range = {p.gamma, p.gamma};
    return lim;
}

MotionLimits small_limits() {
    const double z0 = tiger_config().home_grip_z();
    MotionLimits lim;
    lim.x_range = {-60.0, 60.0};
    lim.y_range = {-60.0, 60.0};
    lim.z_range = {z0, z0 + 20.0};
    lim.roll_range = {-20.0, 20.0};
    lim.pitch_range = {-20.0, 20.0};
    lim.yaw_range = {-20.0, 20.0};
    return lim;
}

} // namespace

TEST_CASE("degenerate grid produces exactly one record") {
    const auto result = generate_workspace(tiger_layout(), tiger_config(),
                                           point_limits(tiger_home_pose()), GridSteps{}, 1e-6, 1);
    CHECK(result.grid_total == 1);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].pose_id == 0);
}

TEST_CASE("doubling the steps strictly reduces the grid and the yield") {
    const GridSteps fine{15.0, 10.0, 10.0};
    const GridSteps coarse{30.0, 20.0, 20.0};
    const auto a =
        generate_workspace(tiger_layout(), tiger_config(), small_limits(), fine, 1e-6, 2);
    const auto b =
        generate_workspace(tiger_layout(), tiger_config(), small_limits(), coarse, 1e-6, 2);
    CHECK(b.grid_total < a.grid_total);
    CHECK(b.records.size() < a.records.size());
    CHECK(a.records.size() > 0);
}

TEST_CASE("every emitted record re-validates with identical lengths") {
    const auto result = generate_workspace(tiger_layout(), tiger_config(), small_limits(),
                                           GridSteps{30.0, 20.0, 20.0}, 1e-6, 2);
    REQUIRE(result.records.size() > 10);
    for (const auto& rec : result.records) {
        const PoseValidity v = pose_valid(rec.pose, tiger_layout(), tiger_config(), 1e-6);
        REQUIRE(v.valid());
        for (int i = 0; i < 6; ++i)
            CHECK(v.record.leg_lengths[static_cast<size_t>(i)] ==
                  doctest::Approx(rec.leg_lengths[static_cast<size_t>(i)]).epsilon(1e-12));
        const double lo = tiger_config().actuator_min_length;
        const double hi = tiger_config().actuator_max_length();
        for (int i = 0; i < 6; ++i) {
            CHECK(rec.leg_lengths[static_cast<size_t>(i)] >= lo - 1e-9);
            CHECK(rec.leg_lengths[static_cast<size_t>(i)] <= hi + 1e-9);
        }
    }
}

TEST_CASE("workspace generation is identical across worker counts") {
    const auto a = generate_workspace(tiger_layout(), tiger_config(), small_limits(),
                                      GridSteps{30.0, 20.0, 20.0}, 1e-6, 1);
    const auto b = generate_workspace(tiger_layout(), tiger_config(), small_limits(),
                                      GridSteps{30.0, 20.0, 20.0}, 1e-6, 4);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].pose_id == b.records[i].pose_id);
        CHECK(a.records[i].leg_lengths == b.records[i].leg_lengths);
        CHECK(a.records[i].jacobian_det == b.records[i].jacobian_det);
    }
}
