#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "error.hpp"
#include "road_network.hpp"

namespace roadspline {

enum class InputFormat { Auto, Xodr, Json };

inline constexpr std::string_view kDefaultJsonPointer = "/OpenDRIVE";

/// OpenDRIVE text pulled out of a scenario file, plus the road id the JSON
/// scenario declares at `/road_id` (if any).
struct ScenarioText {
    std::string xodr;
    std::optional<std::string> road_id;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline bool looks_like_json(std::string_view bytes)
{
    const auto t = trim(bytes);
    return !t.empty() && (t.front() == '{' || t.front() == '[');
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::IoError, "read failed for " + path.string());
    return buf.str();
}

inline ScenarioText extract_from_json(std::string_view bytes, std::string_view pointer)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedJson, e.what());
    }

    nlohmann::json::json_pointer ptr;
    try {
        ptr = nlohmann::json::json_pointer(std::string(pointer));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MissingField, "invalid JSON pointer '" + std::string(pointer) + "': " + e.what());
    }
    if (!doc.contains(ptr))
        throw Error(ErrorCode::MissingField, "JSON pointer '" + std::string(pointer) + "' does not resolve");
    const auto& node = doc.at(ptr);
    if (!node.is_string())
        throw Error(ErrorCode::NotText, "JSON pointer '" + std::string(pointer) + "' resolves to " +
                                            std::string(node.type_name()) + ", expected string");

    ScenarioText out{node.get<std::string>(), std::nullopt};
    const nlohmann::json::json_pointer id_ptr("/road_id");
    if (doc.contains(id_ptr)) {
        const auto& id = doc.at(id_ptr);
        if (id.is_string())
            out.road_id = id.get<std::string>();
        else if (id.is_number_integer())
            out.road_id = std::to_string(id.get<long long>());
    }
    return out;
}

} // namespace detail

/// Returns the OpenDRIVE text held by `bytes`, unchanged. With format Auto the
/// input is treated as JSON when its first non-blank character opens an
/// object or array.
inline ScenarioText read_scenario_bytes(std::string_view bytes, InputFormat format = InputFormat::Auto,
                                        std::string_view json_pointer = kDefaultJsonPointer)
{
    if (format == InputFormat::Auto)
        format = detail::looks_like_json(bytes) ? InputFormat::Json : InputFormat::Xodr;
    if (format == InputFormat::Xodr)
        return {std::string(bytes), std::nullopt};
    return detail::extract_from_json(bytes, json_pointer);
}

inline ScenarioText read_scenario(const std::filesystem::path& path, InputFormat format = InputFormat::Auto,
                                  std::string_view json_pointer = kDefaultJsonPointer)
{
    const std::string bytes = detail::read_file(path);
    if (format == InputFormat::Auto) {
        auto ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".json")
            format = InputFormat::Json;
        else if (ext == ".xodr" || ext == ".xml")
            format = InputFormat::Xodr;
    }
    return read_scenario_bytes(bytes, format, json_pointer);
}

inline std::string load_scenario(const std::filesystem::path& path, InputFormat format = InputFormat::Auto,
                                 std::string_view json_pointer = kDefaultJsonPointer)
{
    return read_scenario(path, format, json_pointer).xodr;
}

inline std::string load_scenario_bytes(std::string_view bytes, InputFormat format = InputFormat::Auto,
                                       std::string_view json_pointer = kDefaultJsonPointer)
{
    return read_scenario_bytes(bytes, format, json_pointer).xodr;
}

namespace detail {

using boost::property_tree::ptree;

inline bool is_meta_key(const std::string& key)
{
    return key == "<xmlattr>" || key == "<xmlcomment>";
}

class XodrReader {
public:
    explicit XodrReader(RoadNetwork& net) : net_(net) {}

    void read_root(const ptree& root)
    {
        for (const auto& [key, child] : root) {
            if (is_meta_key(key) || key == "header")
                continue;
            if (key == "road")
                net_.roads.push_back(read_road(child));
            else
                ++net_.skipped_elements;
        }
    }

private:
    std::optional<std::string> text_attr(const ptree& node, const char* name) const
    {
        const auto attrs = node.get_child_optional("<xmlattr>");
        if (!attrs)
            return std::nullopt;
        const auto value = attrs->get_optional<std::string>(name);
        if (!value)
            return std::nullopt;
        return *value;
    }

    std::optional<double> opt_number(const ptree& node, const char* name) const
    {
        const auto raw = text_attr(node, name);
        if (!raw)
            return std::nullopt;
        const auto t = trim(*raw);
        double value = 0.0;
        const auto* begin = t.data();
        const auto* end = t.data() + t.size();
        // from_chars rejects a leading '+', which some exporters emit.
        if (begin != end && *begin == '+')
            ++begin;
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
            throw Error(ErrorCode::BadAttribute,
                        std::string("attribute '") + name + "' is not a finite number: '" + *raw + "'", road_id_);
        return value;
    }

    double number(const ptree& node, const char* name) const
    {
        const auto v = opt_number(node, name);
        if (!v)
            throw Error(ErrorCode::BadAttribute, std::string("missing numeric attribute '") + name + "'", road_id_);
        return *v;
    }

    double number_or(const ptree& node, const char* name, double fallback) const
    {
        return opt_number(node, name).value_or(fallback);
    }

    CubicRecord cubic(const ptree& node, const char* start_attr) const
    {
        return CubicRecord{number(node, start_attr), number_or(node, "a", 0.0), number_or(node, "b", 0.0),
                           number_or(node, "c", 0.0), number_or(node, "d", 0.0)};
    }

    Road read_road(const ptree& node)
    {
        Road road;
        road.id = text_attr(node, "id").value_or("");
        road_id_ = road.id;

        bool saw_plan_view = false;
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (key == "planView") {
                saw_plan_view = true;
                read_plan_view(child, road);
            } else if (key == "elevationProfile") {
                read_elevation(child, road);
            } else if (key == "lanes") {
                read_lanes(child, road);
            } else {
                ++net_.skipped_elements;
            }
        }
        if (!saw_plan_view)
            throw Error(ErrorCode::MissingPlanView, "road has no planView", road.id);

        const auto declared = opt_number(node, "length");
        if (declared) {
            road.length = *declared;
        } else {
            for (const auto& seg : road.plan_view)
                road.length = std::max(road.length, seg.s_end());
        }

        check_road(road);
        return road;
    }

    void read_plan_view(const ptree& node, Road& road)
    {
        int index = 0;
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (key != "geometry") {
                ++net_.skipped_elements;
                continue;
            }
            road.plan_view.push_back(read_geometry(child, index++));
        }
    }

    GeometrySegment read_geometry(const ptree& node, int index)
    {
        GeometrySegment seg;
        seg.s = number(node, "s");
        seg.x = number(node, "x");
        seg.y = number(node, "y");
        seg.hdg = number(node, "hdg");
        seg.length = number(node, "length");
        if (!(seg.length > 0.0))
            throw Error(ErrorCode::BadAttribute,
                        "geometry #" + std::to_string(index) + " has non-positive length", road_id_);

        bool has_shape = false;
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (has_shape) {
                ++net_.skipped_elements;
                continue;
            }
            has_shape = true;
            if (key == "line") {
                seg.shape = Line{};
            } else if (key == "arc") {
                seg.shape = Arc{number(child, "curvature")};
            } else if (key == "spiral") {
                seg.shape = Spiral{number(child, "curvStart"), number(child, "curvEnd")};
            } else if (key == "poly3") {
                seg.shape = Poly3{number(child, "a"), number(child, "b"), number(child, "c"), number(child, "d")};
            } else if (key == "paramPoly3") {
                ParamPoly3 p;
                p.aU = number(child, "aU");
                p.bU = number(child, "bU");
                p.cU = number(child, "cU");
                p.dU = number(child, "dU");
                p.aV = number(child, "aV");
                p.bV = number(child, "bV");
                p.cV = number(child, "cV");
                p.dV = number(child, "dV");
                const auto range = text_attr(child, "pRange").value_or("normalized");
                if (range == "arcLength")
                    p.p_range = ParamRange::ArcLength;
                else if (range == "normalized")
                    p.p_range = ParamRange::Normalized;
                else
                    throw Error(ErrorCode::BadAttribute, "unknown pRange '" + range + "'", road_id_);
                seg.shape = p;
            } else {
                throw Error(ErrorCode::UnknownGeometry,
                            "geometry #" + std::to_string(index) + " has unsupported shape <" + key + ">", road_id_);
            }
        }
        if (!has_shape)
            throw Error(ErrorCode::UnknownGeometry, "geometry #" + std::to_string(index) + " has no shape element",
                        road_id_);
        return seg;
    }

    void read_elevation(const ptree& node, Road& road)
    {
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (key == "elevation")
                road.elevation_profile.push_back(cubic(child, "s"));
            else
                ++net_.skipped_elements;
        }
    }

    void read_lanes(const ptree& node, Road& road)
    {
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (key == "laneSection")
                road.lane_sections.push_back(read_lane_section(child));
            else
                ++net_.skipped_elements;
        }
    }

    LaneSection read_lane_section(const ptree& node)
    {
        LaneSection section;
        section.s_start = number(node, "s");
        for (const auto& [key, side] : node) {
            if (is_meta_key(key))
                continue;
            if (key == "center")
                continue;
            if (key != "left" && key != "right") {
                ++net_.skipped_elements;
                continue;
            }
            const bool left = key == "left";
            for (const auto& [lane_key, lane_node] : side) {
                if (is_meta_key(lane_key))
                    continue;
                if (lane_key != "lane") {
                    ++net_.skipped_elements;
                    continue;
                }
                Lane lane = read_lane(lane_node);
                if (left ? lane.id <= 0 : lane.id >= 0)
                    throw Error(ErrorCode::BadAttribute,
                                "lane id " + std::to_string(lane.id) + " on the wrong side", road_id_);
                (left ? section.left_lanes : section.right_lanes).push_back(std::move(lane));
            }
        }
        return section;
    }

    Lane read_lane(const ptree& node)
    {
        Lane lane;
        const double id = number(node, "id");
        if (id != std::floor(id) || std::abs(id) > 1e6)
            throw Error(ErrorCode::BadAttribute, "lane id is not an integer", road_id_);
        lane.id = static_cast<int>(id);
        lane.lane_type = text_attr(node, "type").value_or("driving");
        for (const auto& [key, child] : node) {
            if (is_meta_key(key))
                continue;
            if (key == "width")
                lane.width_polys.push_back(cubic(child, "sOffset"));
            else
                ++net_.skipped_elements;
        }
        return lane;
    }

    void check_road(const Road& road) const
    {
        constexpr double kTol = 1e-6;
        for (std::size_t i = 1; i < road.plan_view.size(); ++i)
            if (!(road.plan_view[i].s > road.plan_view[i - 1].s))
                throw Error(ErrorCode::BadAttribute, "planView geometries not ordered by increasing s", road.id);
        for (const auto& seg : road.plan_view)
            if (seg.s_end() > road.length + kTol)
                throw Error(ErrorCode::BadAttribute, "geometry extends past road length", road.id);
        for (std::size_t i = 1; i < road.elevation_profile.size(); ++i)
            if (!(road.elevation_profile[i].start > road.elevation_profile[i - 1].start))
                throw Error(ErrorCode::BadAttribute, "elevation records not ordered by increasing s", road.id);
        for (std::size_t i = 1; i < road.lane_sections.size(); ++i)
            if (!(road.lane_sections[i].s_start > road.lane_sections[i - 1].s_start))
                throw Error(ErrorCode::BadAttribute, "lane sections not ordered by increasing s", road.id);
        for (const auto& section : road.lane_sections) {
            std::vector<int> ids;
            for (const auto& l : section.left_lanes)
                ids.push_back(l.id);
            for (const auto& l : section.right_lanes)
                ids.push_back(l.id);
            std::sort(ids.begin(), ids.end());
            if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
                throw Error(ErrorCode::BadAttribute, "duplicate lane id in lane section", road.id);
            for (const auto* lanes : {&section.left_lanes, &section.right_lanes})
                for (const auto& lane : *lanes)
                    for (std::size_t i = 1; i < lane.width_polys.size(); ++i)
                        if (lane.width_polys[i].start < lane.width_polys[i - 1].start)
                            throw Error(ErrorCode::BadAttribute, "width records not ordered by sOffset", road.id);
        }
    }

    RoadNetwork& net_;
    std::string road_id_;
};

} // namespace detail

/// Parses the supported OpenDRIVE subset into a RoadNetwork. Elements outside
/// the subset are skipped and counted in `skipped_elements`.
inline RoadNetwork parse_xodr(std::string_view xml, std::string source_id = {})
{
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw Error(ErrorCode::MalformedXml, e.message(), {}, static_cast<int>(e.line()));
    }

    const auto root = doc.get_child_optional("OpenDRIVE");
    if (!root)
        throw Error(ErrorCode::MalformedXml, "root element is not <OpenDRIVE>");

    RoadNetwork net;
    net.source_id = std::move(source_id);
    detail::XodrReader reader(net);
    reader.read_root(*root);

    if (net.roads.empty())
        throw Error(ErrorCode::EmptyNetwork, "document contains no <road>");
    std::vector<std::string> ids;
    for (const auto& r : net.roads)
        ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
        throw Error(ErrorCode::BadAttribute, "duplicate road id", *dup);
    return net;
}

} // namespace roadspline
