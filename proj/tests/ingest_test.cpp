#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "roadspline/ingest.hpp"
#include "support/fixtures.hpp"
#include "support/xodr_writer.hpp"

namespace roadspline {
namespace {

constexpr const char* kSingleLine = R"(<?xml version="1.0"?>
<OpenDRIVE>
  <header revMajor="1" revMinor="4"/>
  <road id="7" length="100" junction="-1">
    <link/>
    <planView>
      <geometry s="0" x="0" y="0" hdg="0" length="100"><line/></geometry>
    </planView>
    <elevationProfile>
      <elevation s="0" a="5" b="0" c="0" d="0"/>
    </elevationProfile>
    <lanes>
      <laneSection s="0">
        <left><lane id="1" type="driving"><width sOffset="0" a="4" b="0" c="0" d="0"/><roadMark/></lane></left>
        <center><lane id="0" type="none"/></center>
        <right><lane id="-1" type="driving"><width sOffset="0" a="4" b="0" c="0" d="0"/></lane></right>
      </laneSection>
    </lanes>
    <objects/>
    <signals/>
  </road>
  <junction id="1"/>
</OpenDRIVE>
)";

TEST(LoadScenario, XodrBytesPassThroughUnchanged)
{
    EXPECT_EQ(load_scenario_bytes(kSingleLine, InputFormat::Xodr), kSingleLine);
    EXPECT_EQ(load_scenario_bytes(kSingleLine), kSingleLine);
}

TEST(LoadScenario, JsonPointerExtractsEmbeddedText)
{
    const std::string json = R"({"road":{"xodr":"<OpenDRIVE>…</OpenDRIVE>"}, "road_id": "r42"})";
    const auto sc = read_scenario_bytes(json, InputFormat::Json, "/road/xodr");
    EXPECT_EQ(sc.xodr, "<OpenDRIVE>\xE2\x80\xA6</OpenDRIVE>");
    ASSERT_TRUE(sc.road_id.has_value());
    EXPECT_EQ(*sc.road_id, "r42");
}

TEST(LoadScenario, DefaultPointerIsOpenDrive)
{
    const std::string json = R"({"OpenDRIVE":"<OpenDRIVE/>"})";
    EXPECT_EQ(load_scenario_bytes(json), "<OpenDRIVE/>");
}

TEST(LoadScenario, PointerToNumberIsNotText)
{
    const std::string json = R"({"road":{"xodr":12}})";
    try {
        load_scenario_bytes(json, InputFormat::Json, "/road/xodr");
        FAIL() << "expected NotText";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotText);
    }
}

TEST(LoadScenario, UnresolvedPointerIsMissingField)
{
    try {
        load_scenario_bytes(R"({"a":1})", InputFormat::Json, "/road/xodr");
        FAIL() << "expected MissingField";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingField);
    }
}

TEST(LoadScenario, MissingFileIsIoError)
{
    try {
        load_scenario("/nonexistent/definitely/missing.xodr");
        FAIL() << "expected IoError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(LoadScenario, FileFormatFollowsExtension)
{
    const auto dir = std::filesystem::temp_directory_path() / "roadspline_ingest_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "a.json") << R"({"OpenDRIVE":"<OpenDRIVE/>"})";
        std::ofstream(dir / "b.xodr") << kSingleLine;
    }
    EXPECT_EQ(load_scenario(dir / "a.json"), "<OpenDRIVE/>");
    EXPECT_EQ(load_scenario(dir / "b.xodr"), kSingleLine);
    std::filesystem::remove_all(dir);
}

TEST(ParseXodr, SingleLineRoad)
{
    const auto net = parse_xodr(kSingleLine, "single");
    ASSERT_EQ(net.roads.size(), 1u);
    const auto& road = net.roads[0];
    EXPECT_EQ(road.id, "7");
    EXPECT_DOUBLE_EQ(road.length, 100.0);
    ASSERT_EQ(road.plan_view.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<Line>(road.plan_view[0].shape));
    EXPECT_DOUBLE_EQ(road.plan_view[0].length, 100.0);
    ASSERT_EQ(road.elevation_profile.size(), 1u);
    EXPECT_DOUBLE_EQ(road.elevation_profile[0].a, 5.0);
    ASSERT_EQ(road.lane_sections.size(), 1u);
    EXPECT_EQ(road.lane_sections[0].left_lanes.size(), 1u);
    EXPECT_EQ(road.lane_sections[0].right_lanes.size(), 1u);
    // link, roadMark, objects, signals, junction
    EXPECT_EQ(net.skipped_elements, 5);
}

TEST(ParseXodr, AllShapesAndScientificNotation)
{
    const char* xml = R"(<OpenDRIVE><road id="a" length="5e1">
      <planView>
        <geometry s="0" x="0" y="0" hdg="0" length="1.0E1"><line/></geometry>
        <geometry s="10" x="10" y="0" hdg="0" length="10"><arc curvature="1e-2"/></geometry>
        <geometry s="20" x="20" y="0" hdg="0" length="10"><spiral curvStart="0" curvEnd="-2.5e-2"/></geometry>
        <geometry s="30" x="30" y="0" hdg="0" length="10"><poly3 a="0" b="0" c="1e-3" d="0"/></geometry>
        <geometry s="40" x="40" y="0" hdg="0" length="10">
          <paramPoly3 aU="0" bU="10" cU="0" dU="0" aV="0" bV="0" cV="1" dV="0" pRange="normalized"/>
        </geometry>
      </planView>
      <lanes><laneSection s="0"><center><lane id="0"/></center></laneSection></lanes>
    </road></OpenDRIVE>)";
    const auto net = parse_xodr(xml);
    const auto& pv = net.roads[0].plan_view;
    ASSERT_EQ(pv.size(), 5u);
    EXPECT_DOUBLE_EQ(std::get<Arc>(pv[1].shape).curvature, 0.01);
    EXPECT_DOUBLE_EQ(std::get<Spiral>(pv[2].shape).curv_end, -0.025);
    EXPECT_DOUBLE_EQ(std::get<Poly3>(pv[3].shape).c, 0.001);
    EXPECT_EQ(std::get<ParamPoly3>(pv[4].shape).p_range, ParamRange::Normalized);
    EXPECT_DOUBLE_EQ(net.roads[0].length, 50.0);
}

TEST(ParseXodr, MissingPlanViewNamesRoad)
{
    try {
        parse_xodr(R"(<OpenDRIVE><road id="r9" length="1"><lanes/></road></OpenDRIVE>)");
        FAIL() << "expected MissingPlanView";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingPlanView);
        EXPECT_EQ(e.road_id(), "r9");
    }
}

TEST(ParseXodr, UnknownGeometryShape)
{
    try {
        parse_xodr(R"(<OpenDRIVE><road id="q" length="1"><planView>
            <geometry s="0" x="0" y="0" hdg="0" length="1"><bezier/></geometry></planView></road></OpenDRIVE>)");
        FAIL() << "expected UnknownGeometry";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownGeometry);
        EXPECT_EQ(e.road_id(), "q");
    }
}

TEST(ParseXodr, NonNumericAttribute)
{
    try {
        parse_xodr(R"(<OpenDRIVE><road id="q" length="1"><planView>
            <geometry s="0" x="1,5" y="0" hdg="0" length="1"><line/></geometry></planView></road></OpenDRIVE>)");
        FAIL() << "expected BadAttribute";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadAttribute);
    }
}

TEST(ParseXodr, MalformedXmlReportsLine)
{
    try {
        parse_xodr("<OpenDRIVE>\n<road id=\"1\">\n</OpenDRIVE>");
        FAIL() << "expected MalformedXml";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedXml);
        EXPECT_GT(e.line(), 0);
    }
}

TEST(ParseXodr, WrongRootIsMalformed)
{
    EXPECT_THROW(parse_xodr("<Road/>"), Error);
}

TEST(ParseXodr, MissingRoadLengthIsReconstructed)
{
    const auto net = parse_xodr(R"(<OpenDRIVE><road id="x"><planView>
        <geometry s="0" x="0" y="0" hdg="0" length="3"><line/></geometry>
        <geometry s="3" x="3" y="0" hdg="0" length="4.5"><line/></geometry></planView></road></OpenDRIVE>)");
    EXPECT_DOUBLE_EQ(net.roads[0].length, 7.5);
}

TEST(ParseXodr, DuplicateRoadIdsRejected)
{
    EXPECT_THROW(parse_xodr(R"(<OpenDRIVE>
        <road id="1"><planView><geometry s="0" x="0" y="0" hdg="0" length="1"><line/></geometry></planView></road>
        <road id="1"><planView><geometry s="0" x="0" y="0" hdg="0" length="1"><line/></geometry></planView></road>
        </OpenDRIVE>)"),
                 Error);
}

TEST(ParseXodr, LaneOnWrongSideRejected)
{
    EXPECT_THROW(parse_xodr(R"(<OpenDRIVE><road id="1"><planView>
        <geometry s="0" x="0" y="0" hdg="0" length="1"><line/></geometry></planView>
        <lanes><laneSection s="0"><left><lane id="-1"/></left></laneSection></lanes></road></OpenDRIVE>)"),
                 Error);
}

TEST(ParseXodr, NoRoadsIsEmptyNetwork)
{
    try {
        parse_xodr("<OpenDRIVE><header/></OpenDRIVE>");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyNetwork);
    }
}

// Property: write -> parse is a fixed point and never drops a geometry.
TEST(ParseXodr, WriteParseFixedPointOnRandomNetworks)
{
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 50; ++i) {
        RoadNetwork net;
        const int roads = 1 + i % 3;
        for (int r = 0; r < roads; ++r)
            net.roads.push_back(testing::random_road(rng, "road" + std::to_string(r)));
        Road& first = net.roads.front();
        first.plan_view.push_back({first.length, 1.0, 2.0, 0.3, 7.0, Poly3{0.0, 0.0, 0.01, -1e-4}});
        first.plan_view.push_back(
            {first.length + 7.0, 3.0, 4.0, -0.3, 9.0,
             ParamPoly3{0, 9, 0.5, 0.1, 0, 0, 2, -0.5, i % 2 ? ParamRange::ArcLength : ParamRange::Normalized}});
        first.length += 16.0;

        const auto once = parse_xodr(testing::write_xodr(net));
        const auto twice = parse_xodr(testing::write_xodr(once));
        EXPECT_EQ(once, twice);
        ASSERT_EQ(once.roads.size(), net.roads.size());
        for (std::size_t r = 0; r < net.roads.size(); ++r) {
            EXPECT_EQ(once.roads[r].plan_view.size(), net.roads[r].plan_view.size());
            EXPECT_EQ(once.roads[r].plan_view, net.roads[r].plan_view);
        }
    }
}

} // namespace
} // namespace roadspline
