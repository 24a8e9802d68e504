#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "road_network.hpp"
#include "spline.hpp"

namespace roadspline {

struct BoundaryPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double width = 0.0;
    double s = 0.0;
};

/// One sample at each geometry start plus the final geometry's end.
struct SampleAtStarts {
    bool operator==(const SampleAtStarts&) const = default;
};

/// Samples every `step` metres along the reference line, plus the road end.
struct SampleEvery {
    double step = 1.0;
    bool operator==(const SampleEvery&) const = default;
};

using SamplingStrategy = std::variant<SampleAtStarts, SampleEvery>;

/// Parses "starts" or "step:<metres>".
inline SamplingStrategy parse_sampling(std::string_view text)
{
    if (text == "starts")
        return SampleAtStarts{};
    constexpr std::string_view prefix = "step:";
    if (text.starts_with(prefix)) {
        const auto num = text.substr(prefix.size());
        double step = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), step);
        if (ec == std::errc() && ptr == num.data() + num.size() && step > 0.0 && std::isfinite(step))
            return SampleEvery{step};
    }
    throw Error(ErrorCode::BadAttribute, "sampling must be 'starts' or 'step:<positive metres>', got '" +
                                             std::string(text) + "'");
}

inline std::string to_string(const SamplingStrategy& s)
{
    if (const auto* every = std::get_if<SampleEvery>(&s)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "step:%g", every->step);
        return buf;
    }
    return "starts";
}

struct ConversionConfig {
    double alpha = 0.5;
    int points_per_segment = 1;
    SamplingStrategy sampling = SampleAtStarts{};
    LaneFilter lanes = LaneFilter::All;
    /// Boundaries averaged into control points. Both = centerline.
    enum class Boundary { Both, Left, Right } boundary = Boundary::Both;
};

inline constexpr std::size_t kMinSplinePoints = 4;

struct SplineResult {
    std::vector<ControlPoint> control_points;
    std::vector<Point3> spline_points;
    double alpha = 0.5;
    int points_per_segment = 1;
    std::string source_road_id;
};

namespace detail {

struct Sample {
    double s;
    Pose pose;
};

inline std::vector<Sample> reference_samples(const Road& road, const SamplingStrategy& sampling)
{
    if (road.plan_view.empty())
        throw Error(ErrorCode::EmptyPlanView, "road has no geometry", road.id);

    std::vector<Sample> out;
    if (std::holds_alternative<SampleAtStarts>(sampling)) {
        for (const auto& seg : road.plan_view)
            out.push_back({seg.s, {seg.x, seg.y, seg.hdg}});
        const auto& last = road.plan_view.back();
        out.push_back({last.s_end(), eval_reference_line(last, last.length)});
        return out;
    }

    const double step = std::get<SampleEvery>(sampling).step;
    const double start = road.plan_view.front().s;
    const double end = road.plan_view.back().s_end();
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step));
    for (std::size_t i = 0; i <= count; ++i) {
        const double s = start + static_cast<double>(i) * step;
        if (end - s < 1e-9)
            break;
        out.push_back({s, reference_pose_at(road, s)});
    }
    out.push_back({end, reference_pose_at(road, end)});
    return out;
}

} // namespace detail

/// Lane-boundary samples of one road on the requested side. Each sample is
/// the reference pose pushed sideways by that side's accumulated lane width,
/// tagged with elevation and total road width.
inline std::vector<BoundaryPoint> extract_road_geometry(const Road& road, Side side,
                                                        const SamplingStrategy& sampling = SampleAtStarts{},
                                                        LaneFilter lanes = LaneFilter::All,
                                                        Diagnostics* diag = nullptr)
{
    std::vector<BoundaryPoint> out;
    for (const auto& [s, pose] : detail::reference_samples(road, sampling)) {
        const double offset = lane_offset_at(road, s, side, lanes, diag);
        const double t = side == Side::Left ? offset : -offset;
        const Vec2 p = lateral_offset_point(pose, t);
        const auto ew = elevation_and_width_at(road, s, lanes, diag);
        out.push_back({p.x, p.y, ew.z, ew.width, s});
    }
    return out;
}

/// Every road of the network, concatenated in document order.
inline std::vector<BoundaryPoint> extract_road_geometry(const RoadNetwork& net, Side side,
                                                        const SamplingStrategy& sampling = SampleAtStarts{},
                                                        LaneFilter lanes = LaneFilter::All,
                                                        Diagnostics* diag = nullptr)
{
    std::vector<BoundaryPoint> out;
    for (const auto& road : net.roads) {
        auto part = extract_road_geometry(road, side, sampling, lanes, diag);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Pairwise mean of index-aligned boundary samples. Unequal lengths are
/// truncated to the shorter list (counted in `diag`); consecutive points
/// closer than `dedup_epsilon` collapse into one.
inline std::vector<ControlPoint> compute_centerline(std::span<const BoundaryPoint> right,
                                                    std::span<const BoundaryPoint> left,
                                                    Diagnostics* diag = nullptr,
                                                    double dedup_epsilon = kDedupEpsilon)
{
    if (right.empty() || left.empty())
        throw Error(ErrorCode::EmptyBoundary, "centerline needs both boundaries non-empty");
    if (right.size() != left.size() && diag)
        ++diag->boundary_truncations;

    const std::size_t n = std::min(right.size(), left.size());
    std::vector<ControlPoint> mids;
    mids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = right[i];
        const auto& l = left[i];
        mids.push_back({(r.x + l.x) / 2.0, (r.y + l.y) / 2.0, (r.z + l.z) / 2.0, (r.width + l.width) / 2.0});
    }
    return dedup_control_points(mids, dedup_epsilon);
}

/// Converts one road: boundaries -> control points -> Catmull-Rom spline.
inline SplineResult generate_spline(const Road& road, const ConversionConfig& cfg = {},
                                    Diagnostics* diag = nullptr)
{
    const auto right = extract_road_geometry(road, Side::Right, cfg.sampling, cfg.lanes, diag);
    const auto left = extract_road_geometry(road, Side::Left, cfg.sampling, cfg.lanes, diag);
    if (right.size() < kMinSplinePoints || left.size() < kMinSplinePoints)
        throw Error(ErrorCode::TooFewPoints,
                    "need at least 4 boundary samples per side, got " + std::to_string(right.size()) + "/" +
                        std::to_string(left.size()),
                    road.id);

    SplineResult result;
    result.alpha = cfg.alpha;
    result.points_per_segment = cfg.points_per_segment;
    result.source_road_id = road.id;
    switch (cfg.boundary) {
    case ConversionConfig::Boundary::Both:
        result.control_points = compute_centerline(right, left, diag);
        break;
    case ConversionConfig::Boundary::Left:
        result.control_points = compute_centerline(left, left, diag);
        break;
    case ConversionConfig::Boundary::Right:
        result.control_points = compute_centerline(right, right, diag);
        break;
    }
    try {
        result.spline_points = catmull_rom_spline(result.control_points, cfg.alpha, cfg.points_per_segment);
    } catch (const Error& e) {
        throw Error(e.code(), e.message(), road.id);
    }
    return result;
}

/// Converts a single-road network. Multi-road networks go road by road via
/// the Road overload.
inline SplineResult generate_spline(const RoadNetwork& net, const ConversionConfig& cfg = {},
                                    Diagnostics* diag = nullptr)
{
    if (net.roads.size() != 1)
        throw Error(ErrorCode::BadAttribute,
                    "network holds " + std::to_string(net.roads.size()) + " roads; convert them individually");
    return generate_spline(net.roads.front(), cfg, diag);
}

} // namespace roadspline
