#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "converter.hpp"
#include "error.hpp"
#include "fidelity.hpp"
#include "resim.hpp"
#include "validate.hpp"

namespace roadspline {

/// Text form with 9 significant digits; "-0" collapses to "0".
inline std::string format_number(double v)
{
    if (v == 0.0)
        v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// v rounded to 9 significant digits, so JSON output stays short and stable.
inline double round9(double v)
{
    if (!std::isfinite(v))
        return v;
    return std::strtod(format_number(v).c_str(), nullptr);
}

inline nlohmann::json spline_to_json(const SplineResult& r)
{
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& c : r.control_points)
        cps.push_back({round9(c.x), round9(c.y), round9(c.z), round9(c.width)});
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.spline_points)
        pts.push_back({round9(p.x), round9(p.y), round9(p.z)});
    return {
        {"road_id", r.source_road_id},
        {"alpha", round9(r.alpha)},
        {"points_per_segment", r.points_per_segment},
        {"control_points", std::move(cps)},
        {"spline_points", std::move(pts)},
    };
}

inline SplineResult spline_from_json(const nlohmann::json& j)
{
    try {
        SplineResult r;
        r.source_road_id = j.at("road_id").get<std::string>();
        r.alpha = j.at("alpha").get<double>();
        r.points_per_segment = j.at("points_per_segment").get<int>();
        for (const auto& c : j.at("control_points"))
            r.control_points.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>(),
                                        c.at(3).get<double>()});
        for (const auto& p : j.at("spline_points"))
            r.spline_points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MissingField, std::string("bad spline.json: ") + e.what());
    }
}

inline nlohmann::json fidelity_to_json(const FidelityReport& f)
{
    return {
        {"accuracy_percent", round9(f.accuracy_percent)},
        {"r_squared", f.r_squared ? nlohmann::json(round9(*f.r_squared)) : nlohmann::json(nullptr)},
        {"avg_distance", round9(f.avg_distance)},
        {"max_possible_error", round9(f.max_possible_error)},
        {"n_original", f.n_original},
        {"n_spline", f.n_spline},
    };
}

inline nlohmann::json validity_to_json(const ValidityReport& v)
{
    nlohmann::json failed = nlohmann::json::array();
    for (const auto c : v.failed_criteria)
        failed.push_back(std::string(to_string(c)));
    return {
        {"valid", v.valid},
        {"endpoint_distance", round9(v.endpoint_distance)},
        {"bbox_width", round9(v.bbox_width)},
        {"bbox_height", round9(v.bbox_height)},
        {"self_intersections", v.self_intersections},
        {"failed_criteria", std::move(failed)},
    };
}

inline nlohmann::json sim_to_json(const SimOutcome& s)
{
    nlohmann::json oob = nullptr;
    if (s.oob_position)
        oob = {round9(s.oob_position->x), round9(s.oob_position->y)};
    return {
        {"passed", s.passed},
        {"reason", std::string(to_string(s.reason))},
        {"oob_position", std::move(oob)},
        {"steps", s.steps},
        {"max_lateral_deviation", round9(s.max_lateral_deviation)},
    };
}

inline std::string trace_to_csv(std::span<const TraceRow> trace)
{
    std::string out = "t,x,y,heading,steer_deg,lateral_dev\n";
    for (const auto& r : trace) {
        out += format_number(r.t) + ',' + format_number(r.x) + ',' + format_number(r.y) + ',' +
               format_number(r.heading) + ',' + format_number(r.steer_deg) + ',' + format_number(r.lateral_dev) +
               '\n';
    }
    return out;
}

/// SVG of the spline polyline with control points as dots and an optional
/// out-of-bounds cross. The y axis is flipped so north points up.
inline std::string render_svg(const SplineResult& r, std::optional<Vec2> oob = std::nullopt)
{
    if (r.spline_points.size() < 2)
        throw Error(ErrorCode::TooShort, "render needs at least two spline points", r.source_road_id);

    double lo_x = r.spline_points.front().x, hi_x = lo_x;
    double lo_y = r.spline_points.front().y, hi_y = lo_y;
    const auto grow = [&](double x, double y) {
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
    };
    for (const auto& p : r.spline_points)
        grow(p.x, p.y);
    for (const auto& c : r.control_points)
        grow(c.x, c.y);
    if (oob)
        grow(oob->x, oob->y);

    const double span = std::max(hi_x - lo_x, hi_y - lo_y);
    const double mx = std::max(0.05 * (hi_x - lo_x), 0.05 * span);
    const double my = std::max(0.05 * (hi_y - lo_y), 0.05 * span);
    const double margin_x = mx > 0.0 ? mx : 1.0;
    const double margin_y = my > 0.0 ? my : 1.0;
    const double vb_x = lo_x - margin_x;
    const double vb_y = -(hi_y + margin_y);
    const double vb_w = hi_x - lo_x + 2.0 * margin_x;
    const double vb_h = hi_y - lo_y + 2.0 * margin_y;
    const double stroke = std::max(vb_w, vb_h) / 400.0;

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_number(vb_x) + ' ' + format_number(vb_y) +
           ' ' + format_number(vb_w) + ' ' + format_number(vb_h) + "\">\n";
    svg += "  <title>" + r.source_road_id + "</title>\n";
    svg += "  <polyline class=\"spline\" fill=\"none\" stroke=\"#d4a017\" stroke-width=\"" +
           format_number(2.0 * stroke) + "\" points=\"";
    for (std::size_t i = 0; i < r.spline_points.size(); ++i) {
        if (i)
            svg += ' ';
        svg += format_number(r.spline_points[i].x) + ',' + format_number(-r.spline_points[i].y);
    }
    svg += "\"/>\n";
    for (const auto& c : r.control_points)
        svg += "  <circle class=\"control\" cx=\"" + format_number(c.x) + "\" cy=\"" + format_number(-c.y) +
               "\" r=\"" + format_number(3.0 * stroke) + "\" fill=\"#c0392b\"/>\n";
    if (oob) {
        const double h = 6.0 * stroke;
        const double x = oob->x;
        const double y = -oob->y;
        svg += "  <path class=\"oob\" stroke=\"#1f4e9c\" stroke-width=\"" + format_number(stroke) + "\" d=\"M" +
               format_number(x - h) + ',' + format_number(y - h) + " L" + format_number(x + h) + ',' +
               format_number(y + h) + " M" + format_number(x - h) + ',' + format_number(y + h) + " L" +
               format_number(x + h) + ',' + format_number(y - h) + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace roadspline
