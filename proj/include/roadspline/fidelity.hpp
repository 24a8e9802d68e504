#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "converter.hpp"
#include "error.hpp"
#include "geometry.hpp"

namespace roadspline {

/// How each original point is matched to a spline point.
enum class Pairing {
    /// Closest spline point.
    Nearest,
    /// Spline point at the proportional index round(i * (m - 1) / (n - 1)).
    Index,
};

struct FidelityReport {
    double accuracy_percent = 0.0;
    /// Undefined (nullopt) when every axis of the original points is constant.
    std::optional<double> r_squared;
    double avg_distance = 0.0;
    double max_possible_error = 0.0;
    std::size_t n_original = 0;
    std::size_t n_spline = 0;
};

/// For each original point, the index of the spline point it is paired with.
inline std::vector<std::size_t> pair_points(std::span<const Vec2> original, std::span<const Vec2> spline,
                                            Pairing pairing)
{
    std::vector<std::size_t> match(original.size(), 0);
    if (pairing == Pairing::Index) {
        const std::size_t n = original.size();
        const std::size_t m = spline.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (n == 1) {
                match[i] = 0;
                continue;
            }
            const double pos = static_cast<double>(i) * static_cast<double>(m - 1) / static_cast<double>(n - 1);
            match[i] = std::min(m - 1, static_cast<std::size_t>(std::llround(pos)));
        }
        return match;
    }
    for (std::size_t i = 0; i < original.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < spline.size(); ++j) {
            const double d = std::hypot(spline[j].x - original[i].x, spline[j].y - original[i].y);
            if (d < best) {
                best = d;
                match[i] = j;
            }
        }
    }
    return match;
}

/// Accuracy = (1 - mean paired distance / bbox diagonal of `original`) * 100,
/// clamped to [0, 100]. A zero-size bbox scores 100 only for a perfect match.
inline FidelityReport accuracy(std::span<const Vec2> original, std::span<const Vec2> spline,
                               Pairing pairing = Pairing::Nearest)
{
    if (original.empty() || spline.empty())
        throw Error(ErrorCode::EmptyInput, "accuracy needs non-empty point sets");

    FidelityReport rep;
    rep.n_original = original.size();
    rep.n_spline = spline.size();

    const auto match = pair_points(original, spline, pairing);
    double sum = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i)
        sum += std::hypot(spline[match[i]].x - original[i].x, spline[match[i]].y - original[i].y);
    rep.avg_distance = sum / static_cast<double>(original.size());

    auto [min_x, max_x] = std::minmax_element(original.begin(), original.end(),
                                              [](const Vec2& a, const Vec2& b) { return a.x < b.x; });
    auto [min_y, max_y] = std::minmax_element(original.begin(), original.end(),
                                              [](const Vec2& a, const Vec2& b) { return a.y < b.y; });
    rep.max_possible_error = std::hypot(max_x->x - min_x->x, max_y->y - min_y->y);

    if (rep.max_possible_error == 0.0)
        rep.accuracy_percent = rep.avg_distance == 0.0 ? 100.0 : 0.0;
    else
        rep.accuracy_percent = std::clamp((1.0 - rep.avg_distance / rep.max_possible_error) * 100.0, 0.0, 100.0);
    return rep;
}

/// Coefficient of determination 1 - SS_res / SS_tot. Returns nullopt when the
/// original samples have zero variance.
inline std::optional<double> r_squared(std::span<const double> original, std::span<const double> predicted)
{
    if (original.size() != predicted.size())
        throw Error(ErrorCode::LengthMismatch, "r_squared needs equal-length inputs");
    if (original.size() < 2)
        throw Error(ErrorCode::EmptyInput, "r_squared needs at least two samples");

    double mean = 0.0;
    for (double y : original)
        mean += y;
    mean /= static_cast<double>(original.size());

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        ss_res += (original[i] - predicted[i]) * (original[i] - predicted[i]);
        ss_tot += (original[i] - mean) * (original[i] - mean);
    }
    if (ss_tot == 0.0)
        return std::nullopt;
    return 1.0 - ss_res / ss_tot;
}

/// Per-axis R^2 between original points and their paired spline points;
/// the minimum over the axes that have variance.
inline std::optional<double> r_squared_2d(std::span<const Vec2> original, std::span<const Vec2> spline,
                                          Pairing pairing = Pairing::Nearest)
{
    if (original.empty() || spline.empty())
        throw Error(ErrorCode::EmptyInput, "r_squared needs non-empty point sets");
    const auto match = pair_points(original, spline, pairing);
    std::vector<double> ox, oy, px, py;
    for (std::size_t i = 0; i < original.size(); ++i) {
        ox.push_back(original[i].x);
        oy.push_back(original[i].y);
        px.push_back(spline[match[i]].x);
        py.push_back(spline[match[i]].y);
    }
    std::optional<double> out;
    for (const auto& r : {r_squared(ox, px), r_squared(oy, py)})
        if (r)
            out = out ? std::min(*out, *r) : *r;
    return out;
}

/// Scores a converted road: control points are the originals, the
/// interpolated spline is the prediction.
inline FidelityReport evaluate_fidelity(const SplineResult& result, Pairing pairing = Pairing::Nearest)
{
    std::vector<Vec2> original;
    original.reserve(result.control_points.size());
    for (const auto& c : result.control_points)
        original.push_back({c.x, c.y});
    std::vector<Vec2> spline;
    spline.reserve(result.spline_points.size());
    for (const auto& p : result.spline_points)
        spline.push_back({p.x, p.y});

    FidelityReport rep = accuracy(original, spline, pairing);
    if (original.size() >= 2)
        rep.r_squared = r_squared_2d(original, spline, pairing);
    return rep;
}

} // namespace roadspline
