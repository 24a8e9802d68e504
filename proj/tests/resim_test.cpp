#include <gtest/gtest.h>

#include "roadspline/resim.hpp"
#include "support/roads.hpp"

namespace roadspline {
namespace {

TEST(Simulate, StraightWideRoadPasses)
{
    const auto out = simulate(testing::straight_spline(200.0, 8.0));
    EXPECT_TRUE(out.passed);
    EXPECT_EQ(out.reason, SimReason::ReachedEnd);
    EXPECT_LT(out.max_lateral_deviation, 0.1);
    EXPECT_FALSE(out.oob_position.has_value());
}

TEST(Simulate, OvershootAtPathEndIsNotLateralDeviation)
{
    const double h = 1.0;
    const auto road = testing::spline_through(
        testing::line_points({0, 0}, {165.028 * std::cos(h), 165.028 * std::sin(h)}, 33), 4, 8.0);
    const auto out = simulate(road);
    EXPECT_TRUE(out.passed);
    EXPECT_LT(out.max_lateral_deviation, 1e-6);
}

TEST(Simulate, GentleCurvePasses)
{
    const auto out = simulate(testing::s_curve_spline(8.0));
    EXPECT_TRUE(out.passed) << to_string(out.reason);
}

TEST(Simulate, OverCurvedHairpinGoesOutOfBounds)
{
    const VehicleConfig cfg;
    const double min_radius = cfg.wheelbase / std::tan(25.0 * std::numbers::pi / 180.0);
    ASSERT_LT(3.0, min_radius);
    const auto road = testing::hairpin_spline(3.0, 4.0);
    ASSERT_TRUE(check_validity(road).valid);
    const auto out = simulate(road, cfg);
    EXPECT_FALSE(out.passed);
    EXPECT_EQ(out.reason, SimReason::OutOfBounds);
    ASSERT_TRUE(out.oob_position.has_value());
}

TEST(Simulate, LoopIsInvalidRoad)
{
    const auto out = simulate(testing::loop_spline());
    EXPECT_FALSE(out.passed);
    EXPECT_EQ(out.reason, SimReason::InvalidRoad);
    EXPECT_EQ(out.steps, 0);
}

TEST(Simulate, SteeringClampAndMonotoneProgress)
{
    for (const auto& road : {testing::straight_spline(150.0, 8.0), testing::hairpin_spline(3.0, 4.0),
                             testing::hairpin_spline(8.0, 8.0), testing::s_curve_spline(6.0)}) {
        std::vector<TraceRow> trace;
        simulate(road, {}, LaneMode::Center, &trace);
        ASSERT_FALSE(trace.empty());
        double last = -1.0;
        for (const auto& row : trace) {
            EXPECT_LE(std::abs(row.steer_deg), 25.0 + 1e-12);
            EXPECT_GE(row.progress, last);
            last = row.progress;
        }
    }
}

TEST(Simulate, MaxSteerConfigCannotExceedTwentyFive)
{
    VehicleConfig cfg;
    cfg.max_steer_deg = 40.0;
    std::vector<TraceRow> trace;
    simulate(testing::hairpin_spline(3.0, 4.0), cfg, LaneMode::Center, &trace);
    for (const auto& row : trace)
        EXPECT_LE(std::abs(row.steer_deg), 25.0 + 1e-12);
}

TEST(Simulate, Deterministic)
{
    const auto road = testing::s_curve_spline(8.0);
    std::vector<TraceRow> a, b;
    const auto oa = simulate(road, {}, LaneMode::Center, &a);
    const auto ob = simulate(road, {}, LaneMode::Center, &b);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        EXPECT_EQ(a[i].steer_deg, b[i].steer_deg);
    }
    EXPECT_EQ(oa.steps, ob.steps);
}

TEST(Simulate, MirrorSymmetry)
{
    for (const auto& road : {testing::s_curve_spline(8.0), testing::hairpin_spline(3.0, 4.0)}) {
        std::vector<TraceRow> a, b;
        const auto oa = simulate(road, {}, LaneMode::Center, &a);
        const auto ob = simulate(testing::mirrored(road), {}, LaneMode::Center, &b);
        EXPECT_EQ(oa.reason, ob.reason);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_NEAR(a[i].x, b[i].x, 1e-9);
            EXPECT_NEAR(a[i].y, -b[i].y, 1e-9);
            EXPECT_NEAR(a[i].steer_deg, -b[i].steer_deg, 1e-9);
        }
    }
}

TEST(Simulate, RightLaneModeTracksOffsetPath)
{
    std::vector<TraceRow> trace;
    const auto out = simulate(testing::straight_spline(120.0, 8.0), {}, LaneMode::Right, &trace);
    EXPECT_TRUE(out.passed);
    // Starts on the right-lane centre, a quarter width right of the road centre.
    EXPECT_NEAR(trace.front().y, -2.0, 1e-9);
    EXPECT_NEAR(trace.back().y, -2.0, 0.1);
}

} // namespace
} // namespace roadspline
