#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "error.hpp"

namespace roadspline {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Point3&) const = default;
};

struct ControlPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double width = 0.0;
    bool operator==(const ControlPoint&) const = default;
};

inline constexpr double kDedupEpsilon = 1e-6;

inline double planar_distance(const Point3& a, const Point3& b)
{
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Four consecutive control points; the segment runs from p[1] to p[2].
using Window = std::array<Point3, 4>;

/// Catmull-Rom segment point at t in [0, 1] for knot exponent alpha, using
/// the Barry-Goldman pyramid over knots t_{i+1} = t_i + |P_{i+1} - P_i|^alpha
/// (planar distance). alpha = 0 gives the uniform spline.
inline Point3 catmull_rom_point(const Window& p, double alpha, double t)
{
    double knots[4] = {0.0, 0.0, 0.0, 0.0};
    for (int i = 1; i < 4; ++i) {
        const double d = planar_distance(p[i - 1], p[i]);
        const double step = alpha == 0.0 ? 1.0 : std::pow(d, alpha);
        if (!(step > 0.0))
            throw Error(ErrorCode::DegenerateKnots, "coincident control points in spline window");
        knots[i] = knots[i - 1] + step;
    }
    const double u = knots[1] + t * (knots[2] - knots[1]);

    const auto lerp = [u](const Point3& a, const Point3& b, double ta, double tb) {
        const double wa = (tb - u) / (tb - ta);
        const double wb = (u - ta) / (tb - ta);
        return Point3{wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z};
    };

    const Point3 a1 = lerp(p[0], p[1], knots[0], knots[1]);
    const Point3 a2 = lerp(p[1], p[2], knots[1], knots[2]);
    const Point3 a3 = lerp(p[2], p[3], knots[2], knots[3]);
    const Point3 b1 = lerp(a1, a2, knots[0], knots[2]);
    const Point3 b2 = lerp(a2, a3, knots[1], knots[3]);
    return lerp(b1, b2, knots[1], knots[2]);
}

/// Drops control points closer than `epsilon` (planar) to their predecessor.
inline std::vector<ControlPoint> dedup_control_points(std::span<const ControlPoint> points,
                                                      double epsilon = kDedupEpsilon)
{
    std::vector<ControlPoint> out;
    out.reserve(points.size());
    for (const auto& p : points)
        if (out.empty() || std::hypot(p.x - out.back().x, p.y - out.back().y) >= epsilon)
            out.push_back(p);
    return out;
}

/// Interpolates a Catmull-Rom spline through every control point. Phantom
/// points P_-1 = 2P_0 - P_1 and P_n = 2P_{n-1} - P_{n-2} extend the ends, so
/// the output starts at P_0 and ends at P_{n-1}. Each segment contributes
/// `points_per_segment` samples at t = j / points_per_segment, j = 1..n.
inline std::vector<Point3> catmull_rom_spline(std::span<const ControlPoint> points, double alpha = 0.5,
                                              int points_per_segment = 1)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::OutOfRange, "alpha must lie in [0, 1]");
    if (points_per_segment < 1)
        throw Error(ErrorCode::OutOfRange, "points_per_segment must be positive");

    const auto cps = dedup_control_points(points);
    if (cps.size() < 4)
        throw Error(ErrorCode::TooFewPoints,
                    "spline needs at least 4 distinct control points, got " + std::to_string(cps.size()));

    const std::size_t n = cps.size();
    std::vector<Point3> ext;
    ext.reserve(n + 2);
    const auto as_point = [](const ControlPoint& c) { return Point3{c.x, c.y, c.z}; };
    const Point3 first = as_point(cps[0]);
    const Point3 second = as_point(cps[1]);
    ext.push_back({2.0 * first.x - second.x, 2.0 * first.y - second.y, 2.0 * first.z - second.z});
    for (const auto& c : cps)
        ext.push_back(as_point(c));
    const Point3 last = as_point(cps[n - 1]);
    const Point3 before = as_point(cps[n - 2]);
    ext.push_back({2.0 * last.x - before.x, 2.0 * last.y - before.y, 2.0 * last.z - before.z});

    std::vector<Point3> out;
    out.reserve((n - 1) * static_cast<std::size_t>(points_per_segment) + 1);
    out.push_back(first);
    for (std::size_t seg = 0; seg + 1 < n; ++seg) {
        const Window w{ext[seg], ext[seg + 1], ext[seg + 2], ext[seg + 3]};
        for (int j = 1; j <= points_per_segment; ++j)
            out.push_back(catmull_rom_point(w, alpha, static_cast<double>(j) / points_per_segment));
    }
    return out;
}

} // namespace roadspline
