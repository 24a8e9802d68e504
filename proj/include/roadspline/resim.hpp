#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "converter.hpp"
#include "geometry.hpp"
#include "validate.hpp"

namespace roadspline {

inline constexpr double kMaxSteerDeg = 25.0;

struct VehicleConfig {
    double wheelbase = 2.5;
    double speed = 8.0;
    double lookahead = 6.0;
    double max_steer_deg = 25.0;
    double track_half_width = 1.0;
    double dt = 0.05;
};

/// Which path the vehicle tracks: the road centre, or the centre of the
/// right half (offset by a quarter of the road width).
enum class LaneMode { Center, Right };

enum class SimReason { ReachedEnd, OutOfBounds, Stalled, InvalidRoad };

constexpr std::string_view to_string(SimReason r) noexcept
{
    switch (r) {
    case SimReason::ReachedEnd: return "ReachedEnd";
    case SimReason::OutOfBounds: return "OutOfBounds";
    case SimReason::Stalled: return "Stalled";
    case SimReason::InvalidRoad: return "InvalidRoad";
    }
    return "Unknown";
}

struct TraceRow {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double steer_deg = 0.0;
    double lateral_dev = 0.0;
    double progress = 0.0;
};

struct SimOutcome {
    bool passed = false;
    SimReason reason = SimReason::InvalidRoad;
    std::optional<Vec2> oob_position;
    int steps = 0;
    double max_lateral_deviation = 0.0;
    double sim_time = 0.0;
};

inline constexpr int kStallSteps = 200;

namespace detail {

/// Polyline with cumulative arc length and a per-vertex half width.
class TrackPath {
public:
    TrackPath(std::vector<Vec2> pts, std::vector<double> half_widths)
        : pts_(std::move(pts)), half_(std::move(half_widths)), cum_(pts_.size(), 0.0)
    {
        for (std::size_t i = 1; i < pts_.size(); ++i)
            cum_[i] = cum_[i - 1] + std::hypot(pts_[i].x - pts_[i - 1].x, pts_[i].y - pts_[i - 1].y);
    }

    double length() const { return cum_.back(); }
    std::size_t segments() const { return pts_.size() - 1; }
    double station(std::size_t i) const { return cum_[i]; }

    struct Projection {
        std::size_t segment;
        double s;
        double lateral; // signed, positive left of the path direction
        double distance;
    };

    Projection project_on(std::size_t i, const Vec2& p) const
    {
        const Vec2& a = pts_[i];
        const Vec2& b = pts_[i + 1];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        // The first and last segments extend past the path ends.
        const double lo = i == 0 ? -std::numeric_limits<double>::infinity() : 0.0;
        const double hi = i + 1 == segments() ? std::numeric_limits<double>::infinity() : 1.0;
        const double u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, lo, hi);
        const double cx = a.x + u * dx;
        const double cy = a.y + u * dy;
        const double len = std::sqrt(len2);
        const double lateral = (dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
        return {i, cum_[i] + u * len, lateral, std::hypot(p.x - cx, p.y - cy)};
    }

    /// Closest projection among segments overlapping [s_from, s_to].
    Projection project(const Vec2& p, std::size_t first_segment, double s_to) const
    {
        Projection best = project_on(first_segment, p);
        for (std::size_t i = first_segment + 1; i < segments() && cum_[i] <= s_to; ++i) {
            const auto cand = project_on(i, p);
            if (cand.distance < best.distance)
                best = cand;
        }
        return best;
    }

    Vec2 point_at(double s) const
    {
        s = std::clamp(s, 0.0, length());
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        const std::size_t i = std::min<std::size_t>(segments() - 1, it == cum_.begin() ? 0 : (it - cum_.begin() - 1));
        const double seg_len = cum_[i + 1] - cum_[i];
        const double u = seg_len > 0.0 ? (s - cum_[i]) / seg_len : 0.0;
        return {pts_[i].x + u * (pts_[i + 1].x - pts_[i].x), pts_[i].y + u * (pts_[i + 1].y - pts_[i].y)};
    }

    double half_width_at(double s) const
    {
        s = std::clamp(s, 0.0, length());
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        const std::size_t i = std::min<std::size_t>(segments() - 1, it == cum_.begin() ? 0 : (it - cum_.begin() - 1));
        const double seg_len = cum_[i + 1] - cum_[i];
        const double u = seg_len > 0.0 ? (s - cum_[i]) / seg_len : 0.0;
        return half_[i] + u * (half_[i + 1] - half_[i]);
    }

    const Vec2& front() const { return pts_.front(); }
    const Vec2& at(std::size_t i) const { return pts_[i]; }

private:
    std::vector<Vec2> pts_;
    std::vector<double> half_;
    std::vector<double> cum_;
};

/// Road width at each spline point, interpolated linearly between the
/// control points (which sit at every points_per_segment-th spline index).
inline std::vector<double> spline_widths(const SplineResult& r)
{
    const std::size_t m = r.spline_points.size();
    std::vector<double> w(m, 0.0);
    if (r.control_points.empty())
        return w;
    const auto pps = static_cast<std::size_t>(std::max(1, r.points_per_segment));
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = std::min(i / pps, r.control_points.size() - 1);
        const std::size_t k1 = std::min(k + 1, r.control_points.size() - 1);
        const double u = static_cast<double>(i % pps) / static_cast<double>(pps);
        w[i] = (1.0 - u) * r.control_points[k].width + u * r.control_points[k1].width;
    }
    return w;
}

inline TrackPath build_track(const SplineResult& r, LaneMode mode, double floor_half_width)
{
    const auto widths = spline_widths(r);
    std::vector<Vec2> pts;
    std::vector<double> half;
    const std::size_t m = r.spline_points.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = r.spline_points[i];
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 < m ? i + 1 : m - 1;
        const double hdg =
            std::atan2(r.spline_points[b].y - r.spline_points[a].y, r.spline_points[b].x - r.spline_points[a].x);
        Vec2 q{p.x, p.y};
        double hw = widths[i] / 2.0;
        if (mode == LaneMode::Right) {
            q = lateral_offset_point({p.x, p.y, hdg}, -widths[i] / 4.0);
            hw = widths[i] / 4.0;
        }
        if (!pts.empty() && std::hypot(q.x - pts.back().x, q.y - pts.back().y) < kDedupEpsilon)
            continue;
        pts.push_back(q);
        half.push_back(std::max(hw, floor_half_width));
    }
    return TrackPath(std::move(pts), std::move(half));
}

} // namespace detail

/// Drives a kinematic bicycle with pure-pursuit steering along the converted
/// road. Passes when the vehicle's progress reaches the final control point;
/// fails when its lateral deviation exceeds the local half width.
inline SimOutcome simulate(const SplineResult& result, const VehicleConfig& cfg = {},
                           LaneMode mode = LaneMode::Center, std::vector<TraceRow>* trace = nullptr,
                           ValidityLimits limits = {})
{
    SimOutcome out;
    if (result.spline_points.size() < 2 || !check_validity(result, limits).valid) {
        out.reason = SimReason::InvalidRoad;
        return out;
    }

    const double max_steer = std::min(cfg.max_steer_deg, kMaxSteerDeg) * std::numbers::pi / 180.0;
    const auto path = detail::build_track(result, mode, cfg.track_half_width);
    if (path.segments() < 1) {
        out.reason = SimReason::InvalidRoad;
        return out;
    }

    const Vec2 start = path.front();
    const Vec2 next = path.at(1);
    double x = start.x;
    double y = start.y;
    double yaw = std::atan2(next.y - start.y, next.x - start.x);

    const double step_len = cfg.speed * cfg.dt;
    const double end_tol = std::max(1e-6, 0.5 * step_len);
    const int max_steps = static_cast<int>(std::ceil(3.0 * path.length() / step_len)) + 10 * kStallSteps;

    double progress = 0.0;
    std::size_t seg = 0;
    int since_progress = 0;

    for (int step = 0;; ++step) {
        const auto proj = path.project({x, y}, seg, progress + cfg.lookahead + 2.0 * step_len);
        seg = proj.segment;
        out.max_lateral_deviation = std::max(out.max_lateral_deviation, proj.distance);

        if (proj.s > progress + 1e-9) {
            progress = proj.s;
            since_progress = 0;
        } else {
            ++since_progress;
        }

        const double bound = path.half_width_at(proj.s);

        // Steering toward the lookahead point.
        const Vec2 target = path.point_at(progress + cfg.lookahead);
        const double tx = target.x - x;
        const double ty = target.y - y;
        const double ld = std::max(std::hypot(tx, ty), 1e-9);
        const double rel = std::atan2(ty, tx) - yaw;
        double steer = std::atan2(2.0 * cfg.wheelbase * std::sin(rel), ld);
        steer = std::clamp(steer, -max_steer, max_steer);

        if (trace)
            trace->push_back({step * cfg.dt, x, y, normalize_angle(yaw), steer * 180.0 / std::numbers::pi,
                              proj.distance, progress});

        out.steps = step;
        out.sim_time = step * cfg.dt;
        if (proj.distance > bound) {
            out.reason = SimReason::OutOfBounds;
            out.oob_position = Vec2{x, y};
            return out;
        }
        if (progress >= path.length() - end_tol) {
            out.reason = SimReason::ReachedEnd;
            out.passed = true;
            return out;
        }
        if (since_progress >= kStallSteps || step >= max_steps) {
            out.reason = SimReason::Stalled;
            return out;
        }

        x += cfg.speed * std::cos(yaw) * cfg.dt;
        y += cfg.speed * std::sin(yaw) * cfg.dt;
        yaw += cfg.speed / cfg.wheelbase * std::tan(steer) * cfg.dt;
    }
}

} // namespace roadspline
