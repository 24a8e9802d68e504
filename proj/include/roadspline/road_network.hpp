#pragma once

#include <string>
#include <variant>
#include <vector>

namespace roadspline {

/// Reference-line primitive shapes. Field units follow OpenDRIVE: metres,
/// radians, and 1/m for curvature.
struct Line {
    bool operator==(const Line&) const = default;
};

struct Arc {
    double curvature = 0.0;
    bool operator==(const Arc&) const = default;
};

struct Spiral {
    double curv_start = 0.0;
    double curv_end = 0.0;
    bool operator==(const Spiral&) const = default;
};

struct Poly3 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    bool operator==(const Poly3&) const = default;
};

enum class ParamRange { ArcLength, Normalized };

struct ParamPoly3 {
    double aU = 0.0, bU = 0.0, cU = 0.0, dU = 0.0;
    double aV = 0.0, bV = 0.0, cV = 0.0, dV = 0.0;
    ParamRange p_range = ParamRange::Normalized;
    bool operator==(const ParamPoly3&) const = default;
};

using Shape = std::variant<Line, Arc, Spiral, Poly3, ParamPoly3>;

struct GeometrySegment {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double hdg = 0.0;
    double length = 0.0;
    Shape shape = Line{};

    double s_end() const { return s + length; }
    bool operator==(const GeometrySegment&) const = default;
};

/// Cubic a + b*ds + c*ds^2 + d*ds^3 starting at `s_start` (elevation) or at
/// `s_offset` relative to a lane section (width).
struct CubicRecord {
    double start = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    double eval(double ds) const { return a + ds * (b + ds * (c + ds * d)); }
    bool operator==(const CubicRecord&) const = default;
};

using ElevationSegment = CubicRecord;
using WidthRecord = CubicRecord;

struct Lane {
    int id = 0;
    std::string lane_type = "driving";
    std::vector<WidthRecord> width_polys;
    bool operator==(const Lane&) const = default;
};

struct LaneSection {
    double s_start = 0.0;
    std::vector<Lane> left_lanes;
    std::vector<Lane> right_lanes;
    bool operator==(const LaneSection&) const = default;
};

struct Road {
    std::string id;
    double length = 0.0;
    std::vector<GeometrySegment> plan_view;
    std::vector<ElevationSegment> elevation_profile;
    std::vector<LaneSection> lane_sections;
    bool operator==(const Road&) const = default;
};

struct RoadNetwork {
    std::vector<Road> roads;
    std::string source_id;
    /// Elements outside the supported subset that were skipped while parsing.
    int skipped_elements = 0;
    bool operator==(const RoadNetwork&) const = default;
};

/// Warning counters accumulated by the non-fatal paths of the pipeline.
struct Diagnostics {
    int negative_width_clamps = 0;
    int boundary_truncations = 0;
    int continuity_violations = 0;

    Diagnostics& operator+=(const Diagnostics& o)
    {
        negative_width_clamps += o.negative_width_clamps;
        boundary_truncations += o.boundary_truncations;
        continuity_violations += o.continuity_violations;
        return *this;
    }
};

} // namespace roadspline
