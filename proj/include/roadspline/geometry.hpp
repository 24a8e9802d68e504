#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>

#include "error.hpp"
#include "road_network.hpp"

namespace roadspline {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double hdg = 0.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

struct ElevationWidth {
    double z = 0.0;
    double width = 0.0;
};

enum class Side { Left, Right };

/// Which non-center lanes count towards widths and offsets.
enum class LaneFilter { All, Driving };

/// Wraps an angle to (-pi, pi].
inline double normalize_angle(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(a, two_pi);
    if (r <= -std::numbers::pi)
        r += two_pi;
    return r;
}

namespace detail {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename F>
Vec2 gauss_2d(F&& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Vec2 sum;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
        const Vec2 v = f(mid + half * kGaussNodes[i]);
        sum.x += kGaussWeights[i] * v.x;
        sum.y += kGaussWeights[i] * v.y;
    }
    return {sum.x * half, sum.y * half};
}

/// Adaptive Gauss-Legendre integration of a planar vector field. Splits until
/// the two-half estimate differs from the whole-interval one by <= tol.
template <typename F>
Vec2 adaptive_gauss_2d(F&& f, double a, double b, double tol, Vec2 whole, int depth = 0)
{
    const double m = 0.5 * (a + b);
    const Vec2 left = gauss_2d(f, a, m);
    const Vec2 right = gauss_2d(f, m, b);
    const Vec2 halves{left.x + right.x, left.y + right.y};
    if (depth >= 40 || std::hypot(halves.x - whole.x, halves.y - whole.y) <= tol)
        return halves;
    const Vec2 l = adaptive_gauss_2d(f, a, m, 0.5 * tol, left, depth + 1);
    const Vec2 r = adaptive_gauss_2d(f, m, b, 0.5 * tol, right, depth + 1);
    return {l.x + r.x, l.y + r.y};
}

template <typename F>
Vec2 integrate_2d(F&& f, double a, double b, double tol = 1e-10)
{
    if (b <= a)
        return {};
    return adaptive_gauss_2d(f, a, b, tol, gauss_2d(f, a, b));
}

inline Pose local_to_world(const GeometrySegment& seg, double u, double v, double dhdg)
{
    const double c = std::cos(seg.hdg);
    const double s = std::sin(seg.hdg);
    return {seg.x + c * u - s * v, seg.y + s * u + c * v, seg.hdg + dhdg};
}

inline Pose eval_line(const GeometrySegment& seg, double ds)
{
    return {seg.x + ds * std::cos(seg.hdg), seg.y + ds * std::sin(seg.hdg), seg.hdg};
}

// Chord form: |chord| = 2 sin(k ds / 2) / k along the mean heading. Stays
// accurate as k -> 0, where the textbook (sin(h + k ds) - sin h) / k cancels.
inline Pose eval_arc(const GeometrySegment& seg, double k, double ds)
{
    const double half = 0.5 * k * ds;
    const double chord = half == 0.0 ? ds : ds * std::sin(half) / half;
    const double mean_hdg = seg.hdg + half;
    return {seg.x + chord * std::cos(mean_hdg), seg.y + chord * std::sin(mean_hdg), seg.hdg + k * ds};
}

inline Pose eval_spiral(const GeometrySegment& seg, const Spiral& sp, double ds)
{
    const double rate = (sp.curv_end - sp.curv_start) / seg.length;
    const auto heading = [&](double u) { return seg.hdg + sp.curv_start * u + 0.5 * rate * u * u; };
    const auto tangent = [&](double u) {
        const double th = heading(u);
        return Vec2{std::cos(th), std::sin(th)};
    };
    // Pre-split so no piece turns by more than ~0.5 rad before adaptation.
    const double turn_bound = std::abs(sp.curv_start) * ds + 0.5 * std::abs(rate) * ds * ds;
    const int pieces = std::clamp(static_cast<int>(std::ceil(turn_bound / 0.5)), 1, 4096);
    Vec2 d;
    for (int i = 0; i < pieces; ++i) {
        const double a = ds * i / pieces;
        const double b = ds * (i + 1) / pieces;
        const Vec2 part = integrate_2d(tangent, a, b, 1e-11 / pieces);
        d.x += part.x;
        d.y += part.y;
    }
    return {seg.x + d.x, seg.y + d.y, heading(ds)};
}

/// Arc length of y = v(u) on [0, u].
inline double poly3_arc_length(const Poly3& p, double u)
{
    const auto speed = [&](double w) {
        const double dv = p.b + w * (2.0 * p.c + 3.0 * p.d * w);
        return Vec2{std::sqrt(1.0 + dv * dv), 0.0};
    };
    return integrate_2d(speed, 0.0, u, 1e-12).x;
}

inline Pose eval_poly3(const GeometrySegment& seg, const Poly3& p, double ds)
{
    // Invert arc length -> local u by Newton with a bisection fallback.
    double lo = 0.0;
    double hi = ds;
    double u = ds;
    for (int it = 0; it < 60; ++it) {
        const double f = poly3_arc_length(p, u) - ds;
        if (std::abs(f) <= 1e-12)
            break;
        if (f > 0.0)
            hi = u;
        else
            lo = u;
        const double dv = p.b + u * (2.0 * p.c + 3.0 * p.d * u);
        double next = u - f / std::sqrt(1.0 + dv * dv);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        u = next;
    }
    const double v = p.a + u * (p.b + u * (p.c + u * p.d));
    const double dv = p.b + u * (2.0 * p.c + 3.0 * p.d * u);
    return local_to_world(seg, u, v, std::atan(dv));
}

inline Pose eval_param_poly3(const GeometrySegment& seg, const ParamPoly3& p, double ds)
{
    const double t = p.p_range == ParamRange::ArcLength ? ds : ds / seg.length;
    const double u = p.aU + t * (p.bU + t * (p.cU + t * p.dU));
    const double v = p.aV + t * (p.bV + t * (p.cV + t * p.dV));
    const double du = p.bU + t * (2.0 * p.cU + 3.0 * p.dU * t);
    const double dv = p.bV + t * (2.0 * p.cV + 3.0 * p.dV * t);
    return local_to_world(seg, u, v, std::atan2(dv, du));
}

template <typename... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace detail

/// Pose at local arc length `ds` along one reference-line primitive. Heading
/// is not normalized.
inline Pose eval_reference_line(const GeometrySegment& seg, double ds)
{
    if (!(ds >= 0.0 && ds <= seg.length + 1e-9))
        throw Error(ErrorCode::OutOfRange, "ds=" + std::to_string(ds) + " outside segment of length " +
                                               std::to_string(seg.length));
    if (ds == 0.0)
        return {seg.x, seg.y, seg.hdg};

    const Pose p = std::visit(
        detail::overloaded{
            [&](const Line&) { return detail::eval_line(seg, ds); },
            [&](const Arc& a) { return detail::eval_arc(seg, a.curvature, ds); },
            [&](const Spiral& s) { return detail::eval_spiral(seg, s, ds); },
            [&](const Poly3& p) { return detail::eval_poly3(seg, p, ds); },
            [&](const ParamPoly3& p) { return detail::eval_param_poly3(seg, p, ds); },
        },
        seg.shape);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.hdg))
        throw Error(ErrorCode::NonFinite, "segment parameters produce a non-finite pose");
    return p;
}

/// Index of the record with the largest start <= s; the first record when s
/// precedes all of them. `records` must be non-empty.
template <typename T, typename Key>
std::size_t active_index(std::span<const T> records, double s, Key key)
{
    const auto it = std::upper_bound(records.begin(), records.end(), s,
                                     [&](double value, const T& r) { return value < key(r); });
    return it == records.begin() ? 0 : static_cast<std::size_t>(it - records.begin() - 1);
}

/// Reference-line pose at road arc length s (clamped to the plan view).
inline Pose reference_pose_at(const Road& road, double s)
{
    if (road.plan_view.empty())
        throw Error(ErrorCode::EmptyPlanView, "road has no geometry", road.id);
    const std::span<const GeometrySegment> segs(road.plan_view);
    const auto& seg = segs[active_index(segs, s, [](const GeometrySegment& g) { return g.s; })];
    return eval_reference_line(seg, std::clamp(s - seg.s, 0.0, seg.length));
}

/// Elevation z = a + b ds + c ds^2 + d ds^3 with ds = s - s_elev of the active
/// record. Extrapolates with the first/last record outside the profile; 0
/// when the road has no profile.
inline double elevation_at(const Road& road, double s)
{
    if (road.elevation_profile.empty())
        return 0.0;
    const std::span<const ElevationSegment> recs(road.elevation_profile);
    const auto& rec = recs[active_index(recs, s, [](const CubicRecord& r) { return r.start; })];
    return rec.eval(s - rec.start);
}

namespace detail {

inline const LaneSection& active_section(const Road& road, double s)
{
    if (road.lane_sections.empty())
        throw Error(ErrorCode::NoLaneSection, "road has no lane section", road.id);
    const std::span<const LaneSection> secs(road.lane_sections);
    return secs[active_index(secs, s, [](const LaneSection& l) { return l.s_start; })];
}

inline bool counts(const Lane& lane, LaneFilter filter)
{
    return lane.id != 0 && (filter == LaneFilter::All || lane.lane_type == "driving");
}

inline double lane_width(const Lane& lane, double ds_section, Diagnostics* diag)
{
    if (lane.width_polys.empty())
        return 0.0;
    const std::span<const WidthRecord> recs(lane.width_polys);
    const auto& rec = recs[active_index(recs, ds_section, [](const CubicRecord& r) { return r.start; })];
    const double w = rec.eval(ds_section - rec.start);
    if (w < 0.0) {
        if (diag)
            ++diag->negative_width_clamps;
        return 0.0;
    }
    return w;
}

inline double side_width(const Road& road, double s, Side side, LaneFilter filter, Diagnostics* diag)
{
    const auto& section = active_section(road, s);
    const auto& lanes = side == Side::Left ? section.left_lanes : section.right_lanes;
    double total = 0.0;
    for (const auto& lane : lanes)
        if (counts(lane, filter))
            total += lane_width(lane, s - section.s_start, diag);
    return total;
}

} // namespace detail

/// Sum of clamped widths of every counted non-center lane at s.
inline double road_width_at(const Road& road, double s, LaneFilter filter = LaneFilter::All,
                            Diagnostics* diag = nullptr)
{
    return detail::side_width(road, s, Side::Left, filter, diag) +
           detail::side_width(road, s, Side::Right, filter, diag);
}

/// Accumulated width of the counted lanes on one side; never negative.
inline double lane_offset_at(const Road& road, double s, Side side, LaneFilter filter = LaneFilter::All,
                             Diagnostics* diag = nullptr)
{
    return detail::side_width(road, s, side, filter, diag);
}

inline ElevationWidth elevation_and_width_at(const Road& road, double s, LaneFilter filter = LaneFilter::All,
                                             Diagnostics* diag = nullptr)
{
    return {elevation_at(road, s), road_width_at(road, s, filter, diag)};
}

/// Point at signed lateral offset t from the pose; positive t is left of the
/// heading.
inline Vec2 lateral_offset_point(const Pose& pose, double t)
{
    return {pose.x - t * std::sin(pose.hdg), pose.y + t * std::cos(pose.hdg)};
}

struct ContinuityTolerance {
    double position = 1e-3;
    double heading = 1e-3;
};

/// Counts joints where segment i's end pose misses segment i+1's start pose.
inline int count_discontinuities(const Road& road, ContinuityTolerance tol = {})
{
    int violations = 0;
    for (std::size_t i = 0; i + 1 < road.plan_view.size(); ++i) {
        const auto& cur = road.plan_view[i];
        const auto& next = road.plan_view[i + 1];
        const Pose end = eval_reference_line(cur, cur.length);
        const double gap = std::hypot(end.x - next.x, end.y - next.y);
        const double turn = std::abs(normalize_angle(end.hdg - next.hdg));
        if (gap > tol.position || turn > tol.heading)
            ++violations;
    }
    return violations;
}

} // namespace roadspline
