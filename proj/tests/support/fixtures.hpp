#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "roadspline/converter.hpp"
#include "roadspline/geometry.hpp"
#include "roadspline/road_network.hpp"
#include "roadspline/spline.hpp"

namespace roadspline::testing {

struct ShapeSpec {
    Shape shape;
    double length;
};

inline Lane constant_lane(int id, double width, std::string type = "driving")
{
    return Lane{id, std::move(type), {WidthRecord{0.0, width, 0.0, 0.0, 0.0}}};
}

/// Road whose plan view chains the given shapes end to end from `start`.
inline Road chain_road(std::string id, const std::vector<ShapeSpec>& shapes, Pose start,
                       const std::vector<double>& left_widths, const std::vector<double>& right_widths)
{
    Road road;
    road.id = std::move(id);
    Pose pose = start;
    double s = 0.0;
    for (const auto& spec : shapes) {
        GeometrySegment seg{s, pose.x, pose.y, pose.hdg, spec.length, spec.shape};
        road.plan_view.push_back(seg);
        pose = eval_reference_line(seg, spec.length);
        s += spec.length;
    }
    road.length = s;
    LaneSection sec;
    for (std::size_t i = 0; i < left_widths.size(); ++i)
        sec.left_lanes.push_back(constant_lane(static_cast<int>(i) + 1, left_widths[i]));
    for (std::size_t i = 0; i < right_widths.size(); ++i)
        sec.right_lanes.push_back(constant_lane(-static_cast<int>(i) - 1, right_widths[i]));
    road.lane_sections.push_back(sec);
    return road;
}

inline Road straight_road(std::string id, int segments, double seg_len, double lane_width = 4.0)
{
    std::vector<ShapeSpec> shapes(segments, ShapeSpec{Line{}, seg_len});
    return chain_road(std::move(id), shapes, {}, {lane_width}, {lane_width});
}

/// Random line/arc/spiral road with 1-3 lanes per side and optional
/// elevation. Curvature stays gentle so the road neither loops nor leaves a
/// modest bounding box.
inline Road random_road(std::mt19937_64& rng, std::string id)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> nseg(4, 8);
    std::uniform_int_distribution<int> nlanes(1, 3);
    std::uniform_int_distribution<int> kind(0, 2);

    const int n = nseg(rng);
    std::vector<ShapeSpec> shapes;
    double k = 0.0;
    for (int i = 0; i < n; ++i) {
        const double len = 10.0 + 30.0 * unit(rng);
        switch (kind(rng)) {
        case 0:
            shapes.push_back({Line{}, len});
            k = 0.0;
            break;
        case 1: {
            k = (unit(rng) - 0.5) * 0.04;
            shapes.push_back({Arc{k}, len});
            break;
        }
        default: {
            const double k_end = (unit(rng) - 0.5) * 0.04;
            shapes.push_back({Spiral{k, k_end}, len});
            k = k_end;
            break;
        }
        }
    }
    const Pose start{(unit(rng) - 0.5) * 100.0, (unit(rng) - 0.5) * 100.0, unit(rng) * 2.0 * std::numbers::pi};

    std::vector<double> left(nlanes(rng)), right(nlanes(rng));
    for (auto& w : left)
        w = 2.75 + unit(rng);
    for (auto& w : right)
        w = 2.75 + unit(rng);
    Road road = chain_road(std::move(id), shapes, start, left, right);
    if (unit(rng) < 0.5) {
        road.elevation_profile.push_back({0.0, 10.0 * unit(rng), 0.02 * (unit(rng) - 0.5), 0.0, 0.0});
        road.elevation_profile.push_back({road.length / 2.0, 5.0 * unit(rng), 0.0, 1e-4 * unit(rng), 0.0});
    }
    return road;
}

inline RoadNetwork network_of(Road road)
{
    RoadNetwork net;
    net.source_id = road.id;
    net.roads.push_back(std::move(road));
    return net;
}

inline std::vector<ControlPoint> control_points(const std::vector<Vec2>& pts, double width = 8.0)
{
    std::vector<ControlPoint> out;
    for (const auto& p : pts)
        out.push_back({p.x, p.y, 0.0, width});
    return out;
}

/// SplineResult through `pts` (planar), as the converter would produce it.
inline SplineResult spline_through(const std::vector<Vec2>& pts, int points_per_segment = 4, double width = 8.0,
                                   double alpha = 0.5, std::string id = "fixture")
{
    SplineResult r;
    r.control_points = control_points(pts, width);
    r.spline_points = catmull_rom_spline(r.control_points, alpha, points_per_segment);
    r.alpha = alpha;
    r.points_per_segment = points_per_segment;
    r.source_road_id = std::move(id);
    return r;
}

/// Points along a circular arc of radius r starting at the origin heading +x.
inline std::vector<Vec2> arc_points(double radius, double sweep, int n, Vec2 offset = {}, double hdg0 = 0.0)
{
    std::vector<Vec2> pts;
    for (int i = 0; i <= n; ++i) {
        const double a = sweep * i / n;
        const double lx = radius * std::sin(a);
        const double ly = radius * (1.0 - std::cos(a));
        pts.push_back({offset.x + lx * std::cos(hdg0) - ly * std::sin(hdg0),
                       offset.y + lx * std::sin(hdg0) + ly * std::cos(hdg0)});
    }
    return pts;
}

inline std::vector<Vec2> line_points(Vec2 from, Vec2 to, int n)
{
    std::vector<Vec2> pts;
    for (int i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        pts.push_back({from.x + u * (to.x - from.x), from.y + u * (to.y - from.y)});
    }
    return pts;
}

} // namespace roadspline::testing
