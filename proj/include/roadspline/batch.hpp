#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "converter.hpp"
#include "error.hpp"
#include "fidelity.hpp"
#include "ingest.hpp"
#include "report_io.hpp"
#include "resim.hpp"
#include "validate.hpp"

namespace roadspline {

struct BatchConfig {
    ConversionConfig conversion;
    InputFormat format = InputFormat::Auto;
    std::string json_pointer = std::string(kDefaultJsonPointer);
    Pairing pairing = Pairing::Nearest;
    bool validate = false;
    bool resim = false;
    LaneMode lane = LaneMode::Center;
    VehicleConfig vehicle;
    ValidityLimits limits;
    unsigned jobs = 1;
};

/// Outcome of one road (or of one unreadable file).
struct RoadRecord {
    std::string campaign;
    std::string road_id;
    std::string source;
    std::optional<SplineResult> spline;
    std::optional<FidelityReport> fidelity;
    std::optional<ValidityReport> validity;
    std::optional<SimOutcome> sim;
    std::vector<TraceRow> trace;
    std::optional<ErrorCode> error;
    std::string error_message;
    Diagnostics diagnostics;
    int skipped_elements = 0;
};

struct CampaignSummary {
    std::string campaign_id;
    int total = 0;
    int converted = 0;
    int conversion_errors = 0;
    int valid = 0;
    int sim_pass = 0;
    int sim_fail = 0;
    double pass_percent = 0.0;
    /// Summed simulated driving time (s); deterministic unlike wall_time.
    double sim_time = 0.0;
    double wall_time = 0.0;

    int simulated() const { return sim_pass + sim_fail; }
};

struct BatchResult {
    std::vector<RoadRecord> records;
    std::vector<CampaignSummary> campaigns;
    std::vector<std::string> warnings;

    bool any_conversion_error() const
    {
        return std::any_of(campaigns.begin(), campaigns.end(),
                           [](const CampaignSummary& c) { return c.conversion_errors > 0; });
    }
};

namespace detail {

struct InputFile {
    std::filesystem::path path;
    std::string campaign;
};

inline bool is_scenario_file(const std::filesystem::path& p)
{
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".xodr" || ext == ".json";
}

inline std::string dir_label(const std::filesystem::path& dir)
{
    auto name = std::filesystem::absolute(dir).lexically_normal().filename().string();
    if (name.empty())
        name = std::filesystem::absolute(dir).lexically_normal().parent_path().filename().string();
    return name.empty() ? "default" : name;
}

/// Files directly under `input` belong to a campaign named after `input`
/// itself; files below a subdirectory belong to that subdirectory's campaign.
inline std::vector<InputFile> discover_inputs(const std::filesystem::path& input)
{
    namespace fs = std::filesystem;
    std::vector<InputFile> files;
    std::error_code ec;
    if (fs::is_regular_file(input, ec)) {
        files.push_back({input, dir_label(input.has_parent_path() ? input.parent_path() : fs::path("."))});
        return files;
    }
    if (!fs::is_directory(input, ec))
        throw Error(ErrorCode::IoError, "input does not exist: " + input.string());

    const std::string root_label = dir_label(input);
    for (auto it = fs::recursive_directory_iterator(input, ec); it != fs::recursive_directory_iterator();
         it.increment(ec)) {
        if (ec)
            throw Error(ErrorCode::IoError, "cannot list " + input.string() + ": " + ec.message());
        if (!it->is_regular_file() || !is_scenario_file(it->path()))
            continue;
        const auto rel = fs::relative(it->path(), input);
        const std::string campaign = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : root_label;
        files.push_back({it->path(), campaign});
    }
    std::sort(files.begin(), files.end(), [](const InputFile& a, const InputFile& b) {
        return a.campaign != b.campaign ? a.campaign < b.campaign : a.path.generic_string() < b.path.generic_string();
    });
    return files;
}

inline void convert_road(RoadRecord& rec, const Road& road, const BatchConfig& cfg)
{
    try {
        rec.spline = generate_spline(road, cfg.conversion, &rec.diagnostics);
        rec.diagnostics.continuity_violations += count_discontinuities(road);
        rec.fidelity = evaluate_fidelity(*rec.spline, cfg.pairing);
        if (cfg.validate || cfg.resim)
            rec.validity = check_validity(*rec.spline, cfg.limits);
        if (cfg.resim)
            rec.sim = simulate(*rec.spline, cfg.vehicle, cfg.lane, &rec.trace, cfg.limits);
    } catch (const Error& e) {
        rec.spline.reset();
        rec.fidelity.reset();
        rec.validity.reset();
        rec.sim.reset();
        rec.trace.clear();
        rec.error = e.code();
        rec.error_message = e.message();
    }
}

inline std::vector<RoadRecord> process_file(const InputFile& in, const BatchConfig& cfg)
{
    const std::string stem = in.path.stem().string();
    std::vector<RoadRecord> out;
    RoadNetwork net;
    std::optional<std::string> declared_id;
    try {
        const auto scenario = read_scenario(in.path, cfg.format, cfg.json_pointer);
        declared_id = scenario.road_id;
        net = parse_xodr(scenario.xodr, in.path.filename().string());
    } catch (const Error& e) {
        RoadRecord rec;
        rec.campaign = in.campaign;
        rec.road_id = declared_id.value_or(stem);
        rec.source = in.path.filename().string();
        rec.error = e.code();
        rec.error_message = e.message();
        out.push_back(std::move(rec));
        return out;
    }

    for (const auto& road : net.roads) {
        RoadRecord rec;
        rec.campaign = in.campaign;
        rec.source = in.path.filename().string();
        rec.skipped_elements = net.skipped_elements;
        rec.road_id = net.roads.size() == 1 ? declared_id.value_or(stem) : stem + "_" + road.id;
        convert_road(rec, road, cfg);
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::string safe_file_id(std::string id)
{
    for (auto& c : id)
        if (c == '/' || c == '\\' || c == ':' || c == '\0')
            c = '_';
    if (id.empty() || id == "." || id == "..")
        id = "_" + id;
    return id;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace detail

inline nlohmann::json record_to_json(const RoadRecord& rec)
{
    nlohmann::json j = {
        {"road_id", rec.road_id},
        {"campaign", rec.campaign},
        {"source", rec.source},
        {"converted", rec.spline.has_value()},
        {"error", rec.error ? nlohmann::json(std::string(to_string(*rec.error))) : nlohmann::json(nullptr)},
        {"error_message", rec.error ? nlohmann::json(rec.error_message) : nlohmann::json(nullptr)},
        {"warnings",
         {{"negative_width_clamps", rec.diagnostics.negative_width_clamps},
          {"boundary_truncations", rec.diagnostics.boundary_truncations},
          {"continuity_violations", rec.diagnostics.continuity_violations},
          {"skipped_elements", rec.skipped_elements}}},
        {"fidelity", rec.fidelity ? fidelity_to_json(*rec.fidelity) : nlohmann::json(nullptr)},
        {"validity", rec.validity ? validity_to_json(*rec.validity) : nlohmann::json(nullptr)},
        {"simulation", rec.sim ? sim_to_json(*rec.sim) : nlohmann::json(nullptr)},
    };
    return j;
}

/// Converts, scores, and optionally validates / re-simulates every scenario
/// under `input`. Records come back sorted by campaign then road id.
inline BatchResult run_batch(const std::filesystem::path& input, const BatchConfig& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    const auto files = detail::discover_inputs(input);

    BatchResult result;
    if (files.empty())
        result.warnings.push_back("no .xodr or .json scenario files found under " + input.string());

    std::vector<std::vector<RoadRecord>> per_file(files.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(files.size())));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++)
            per_file[i] = detail::process_file(files[i], cfg);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }

    for (auto& recs : per_file)
        for (auto& r : recs)
            result.records.push_back(std::move(r));
    std::stable_sort(result.records.begin(), result.records.end(), [](const RoadRecord& a, const RoadRecord& b) {
        return a.campaign != b.campaign ? a.campaign < b.campaign : a.road_id < b.road_id;
    });

    // Road ids double as file names; make them unique per campaign.
    std::map<std::string, std::set<std::string>> used;
    for (auto& r : result.records) {
        auto& ids = used[r.campaign];
        std::string id = detail::safe_file_id(r.road_id);
        if (ids.count(id)) {
            int n = 2;
            while (ids.count(id + "_" + std::to_string(n)))
                ++n;
            result.warnings.push_back("duplicate road id '" + id + "' in campaign " + r.campaign + " (" + r.source +
                                      ")");
            id += "_" + std::to_string(n);
        }
        ids.insert(id);
        r.road_id = id;
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::map<std::string, CampaignSummary> by_campaign;
    for (const auto& r : result.records) {
        auto& c = by_campaign[r.campaign];
        c.campaign_id = r.campaign;
        ++c.total;
        if (r.spline)
            ++c.converted;
        else
            ++c.conversion_errors;
        if (r.validity && r.validity->valid)
            ++c.valid;
        if (r.sim) {
            (r.sim->passed ? c.sim_pass : c.sim_fail) += 1;
            c.sim_time += r.sim->sim_time;
        }
    }
    for (auto& [id, c] : by_campaign) {
        c.pass_percent = c.simulated() > 0 ? 100.0 * c.sim_pass / c.simulated() : 0.0;
        c.wall_time = wall;
        if (c.converted + c.conversion_errors != c.total)
            throw std::logic_error("campaign summary arithmetic violated for " + id);
        result.campaigns.push_back(c);
    }
    return result;
}

inline std::string summary_csv(const BatchResult& result)
{
    std::string out = "campaign,pass,fail,total,exe_time,pass_percent\n";
    for (const auto& c : result.campaigns) {
        out += c.campaign_id + ',' + std::to_string(c.sim_pass) + ',' + std::to_string(c.sim_fail) + ',' +
               std::to_string(c.total) + ',' + format_number(c.sim_time) + ',' +
               (c.simulated() > 0 ? format_number(c.pass_percent) : std::string()) + '\n';
    }
    return out;
}

/// Writes `<out>/<campaign>/<road_id>.{spline.json,report.json,trace.csv,svg}`
/// and `<out>/summary.csv`.
inline void write_batch(const BatchResult& result, const std::filesystem::path& out_dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

    for (const auto& r : result.records) {
        const fs::path dir = out_dir / detail::safe_file_id(r.campaign);
        fs::create_directories(dir, ec);
        if (ec)
            throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
        detail::write_text(dir / (r.road_id + ".report.json"), record_to_json(r).dump(2) + "\n");
        if (r.spline) {
            detail::write_text(dir / (r.road_id + ".spline.json"), spline_to_json(*r.spline).dump(2) + "\n");
            std::optional<Vec2> oob;
            if (r.sim)
                oob = r.sim->oob_position;
            detail::write_text(dir / (r.road_id + ".svg"), render_svg(*r.spline, oob));
        }
        if (r.sim && !r.trace.empty())
            detail::write_text(dir / (r.road_id + ".trace.csv"), trace_to_csv(r.trace));
    }

    nlohmann::json campaigns = nlohmann::json::array();
    for (const auto& c : result.campaigns) {
        campaigns.push_back({{"campaign_id", c.campaign_id},
                             {"total", c.total},
                             {"converted", c.converted},
                             {"conversion_errors", c.conversion_errors},
                             {"valid", c.valid},
                             {"sim_pass", c.sim_pass},
                             {"sim_fail", c.sim_fail},
                             {"pass_percent", c.simulated() > 0 ? nlohmann::json(round9(c.pass_percent))
                                                                : nlohmann::json(nullptr)},
                             {"sim_time", round9(c.sim_time)}});
    }
    detail::write_text(out_dir / "summary.csv", summary_csv(result));
    detail::write_text(out_dir / "summary.json", campaigns.dump(2) + "\n");
}

} // namespace roadspline
