#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "converter.hpp"
#include "error.hpp"
#include "geometry.hpp"

namespace roadspline {

enum class Criterion { DistinctEndpoints, BoundingBox, SelfIntersection };

constexpr std::string_view to_string(Criterion c) noexcept
{
    switch (c) {
    case Criterion::DistinctEndpoints: return "DistinctEndpoints";
    case Criterion::BoundingBox: return "BoundingBox";
    case Criterion::SelfIntersection: return "SelfIntersection";
    }
    return "Unknown";
}

struct ValidityReport {
    bool valid = true;
    double endpoint_distance = 0.0;
    double bbox_width = 0.0;
    double bbox_height = 0.0;
    int self_intersections = 0;
    std::vector<Criterion> failed_criteria;
};

struct ValidityLimits {
    double bbox_limit = 250.0;
    double endpoint_epsilon = 1.0;
};

namespace detail {

inline constexpr double kOrientEps = 1e-9;

inline double orient(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline int sign_eps(double v)
{
    return v > kOrientEps ? 1 : (v < -kOrientEps ? -1 : 0);
}

inline bool same_point(const Vec2& a, const Vec2& b)
{
    return std::abs(a.x - b.x) <= kOrientEps && std::abs(a.y - b.y) <= kOrientEps;
}

// p lies on segment [a, b] (collinearity already established) away from both
// endpoints.
inline bool strictly_inside(const Vec2& p, const Vec2& a, const Vec2& b)
{
    if (same_point(p, a) || same_point(p, b))
        return false;
    return p.x >= std::min(a.x, b.x) - kOrientEps && p.x <= std::max(a.x, b.x) + kOrientEps &&
           p.y >= std::min(a.y, b.y) - kOrientEps && p.y <= std::max(a.y, b.y) + kOrientEps;
}

} // namespace detail

/// True when the closed segments [p1, p2] and [q1, q2] share a point that is
/// interior to at least one of them.
inline bool segments_cross_interior(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
{
    using namespace detail;
    const int o1 = sign_eps(orient(p1, p2, q1));
    const int o2 = sign_eps(orient(p1, p2, q2));
    const int o3 = sign_eps(orient(q1, q2, p1));
    const int o4 = sign_eps(orient(q1, q2, p2));

    if (o1 * o2 < 0 && o3 * o4 < 0)
        return true;
    if (o1 == 0 && strictly_inside(q1, p1, p2))
        return true;
    if (o2 == 0 && strictly_inside(q2, p1, p2))
        return true;
    if (o3 == 0 && strictly_inside(p1, q1, q2))
        return true;
    if (o4 == 0 && strictly_inside(p2, q1, q2))
        return true;
    // Identical (possibly reversed) collinear segments.
    return o1 == 0 && o2 == 0 &&
           ((same_point(p1, q1) && same_point(p2, q2)) || (same_point(p1, q2) && same_point(p2, q1)));
}

/// True when the closed segments [p1, p2] and [q1, q2] share any point.
inline bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
{
    using detail::same_point;
    return same_point(p1, q1) || same_point(p1, q2) || same_point(p2, q1) || same_point(p2, q2) ||
           segments_cross_interior(p1, p2, q1, q2);
}

/// Number of non-adjacent segment pairs of the polyline that touch. The first
/// and last segments of a closed polyline may meet at the closing vertex. Uses an
/// x-interval sweep: segments are visited by increasing min x and only tested
/// against segments whose x-extent overlaps.
inline int self_intersects(std::span<const Vec2> polyline)
{
    if (polyline.size() < 2)
        return 0;
    const std::size_t nseg = polyline.size() - 1;
    std::vector<std::size_t> order(nseg);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto min_x = [&](std::size_t i) { return std::min(polyline[i].x, polyline[i + 1].x); };
    const auto max_x = [&](std::size_t i) { return std::max(polyline[i].x, polyline[i + 1].x); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = min_x(a), mb = min_x(b);
        return ma != mb ? ma < mb : a < b;
    });

    const bool closed = detail::same_point(polyline.front(), polyline.back());
    int count = 0;
    for (std::size_t oi = 0; oi < nseg; ++oi) {
        const std::size_t i = order[oi];
        const double reach = max_x(i) + detail::kOrientEps;
        const double lo_y = std::min(polyline[i].y, polyline[i + 1].y) - detail::kOrientEps;
        const double hi_y = std::max(polyline[i].y, polyline[i + 1].y) + detail::kOrientEps;
        for (std::size_t oj = oi + 1; oj < nseg; ++oj) {
            const std::size_t j = order[oj];
            if (min_x(j) > reach)
                break;
            if (i + 1 == j || j + 1 == i)
                continue;
            if (std::max(polyline[j].y, polyline[j + 1].y) < lo_y || std::min(polyline[j].y, polyline[j + 1].y) > hi_y)
                continue;
            const bool closure = closed && nseg > 2 && std::min(i, j) == 0 && std::max(i, j) == nseg - 1;
            const auto& a = polyline[i];
            const auto& b = polyline[i + 1];
            const auto& c = polyline[j];
            const auto& d = polyline[j + 1];
            if (closure ? segments_cross_interior(a, b, c, d) : segments_cross(a, b, c, d))
                ++count;
        }
    }
    return count;
}

/// Checks the three simulator-readiness rules on the interpolated road:
/// distinct endpoints, fits in a bbox_limit square, no self-crossing.
inline ValidityReport check_validity(const SplineResult& result, ValidityLimits limits = {})
{
    if (result.spline_points.size() < 2)
        throw Error(ErrorCode::TooShort, "validity check needs at least two spline points", result.source_road_id);

    std::vector<Vec2> pts;
    pts.reserve(result.spline_points.size());
    for (const auto& p : result.spline_points)
        if (pts.empty() || !detail::same_point(pts.back(), {p.x, p.y}))
            pts.push_back({p.x, p.y});

    ValidityReport rep;
    const auto& first = result.spline_points.front();
    const auto& last = result.spline_points.back();
    rep.endpoint_distance = std::hypot(last.x - first.x, last.y - first.y);
    if (rep.endpoint_distance <= limits.endpoint_epsilon)
        rep.failed_criteria.push_back(Criterion::DistinctEndpoints);

    double lo_x = pts.front().x, hi_x = lo_x, lo_y = pts.front().y, hi_y = lo_y;
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    rep.bbox_width = hi_x - lo_x;
    rep.bbox_height = hi_y - lo_y;
    if (rep.bbox_width > limits.bbox_limit || rep.bbox_height > limits.bbox_limit)
        rep.failed_criteria.push_back(Criterion::BoundingBox);

    rep.self_intersections = self_intersects(pts);
    if (rep.self_intersections > 0)
        rep.failed_criteria.push_back(Criterion::SelfIntersection);

    rep.valid = rep.failed_criteria.empty();
    return rep;
}

} // namespace roadspline
