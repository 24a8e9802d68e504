#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "roadspline/roadspline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStrict = 2;

} // namespace

int main(int argc, char** argv)
{
    using namespace roadspline;

    CLI::App app{"Convert OpenDRIVE roads to Catmull-Rom splines, score, validate, and re-simulate them"};
    app.require_subcommand(1);

    auto* convert = app.add_subcommand("convert", "Batch-convert a scenario file or directory");
    std::string input;
    std::string output;
    std::string side = "both";
    double alpha = 0.5;
    int points_per_segment = 1;
    std::string sampling = "starts";
    std::string json_pointer(kDefaultJsonPointer);
    std::string pairing = "nearest";
    std::string lanes = "all";
    std::string lane = "center";
    bool validate = false;
    bool resim = false;
    unsigned jobs = 1;
    bool strict = false;

    convert->add_option("--input", input, "Scenario file or directory (.xodr / .json)")->required();
    convert->add_option("--output", output, "Output directory")->required();
    convert->add_option("--side", side, "Boundary used for control points")
        ->check(CLI::IsMember({"left", "right", "both"}));
    convert->add_option("--alpha", alpha, "Catmull-Rom knot exponent")->check(CLI::Range(0.0, 1.0));
    convert->add_option("--points-per-segment", points_per_segment, "Spline samples per control segment")
        ->check(CLI::PositiveNumber);
    convert->add_option("--sampling", sampling, "starts | step:<metres>");
    convert->add_option("--json-pointer", json_pointer, "Pointer to the OpenDRIVE text in JSON scenarios");
    convert->add_option("--pairing", pairing, "Fidelity point pairing")
        ->check(CLI::IsMember({"nearest", "index"}));
    convert->add_option("--lanes", lanes, "Lanes counted for width/offset")
        ->check(CLI::IsMember({"all", "driving"}));
    convert->add_flag("--validate", validate, "Apply road validity criteria");
    convert->add_flag("--resim", resim, "Re-simulate each road with a path follower");
    convert->add_option("--lane", lane, "Tracked path for --resim")->check(CLI::IsMember({"center", "right"}));
    convert->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    convert->add_flag("--strict", strict, "Exit with code 2 if any road fails to convert");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    BatchConfig cfg;
    try {
        cfg.conversion.sampling = parse_sampling(sampling);
    } catch (const Error& e) {
        std::cerr << "error: " << e.message() << "\n";
        return kExitUsage;
    }
    cfg.conversion.alpha = alpha;
    cfg.conversion.points_per_segment = points_per_segment;
    cfg.conversion.lanes = lanes == "driving" ? LaneFilter::Driving : LaneFilter::All;
    cfg.conversion.boundary = side == "left"    ? ConversionConfig::Boundary::Left
                              : side == "right" ? ConversionConfig::Boundary::Right
                                                : ConversionConfig::Boundary::Both;
    cfg.json_pointer = json_pointer;
    cfg.pairing = pairing == "index" ? Pairing::Index : Pairing::Nearest;
    cfg.validate = validate;
    cfg.resim = resim;
    cfg.lane = lane == "right" ? LaneMode::Right : LaneMode::Center;
    cfg.jobs = jobs;

    BatchResult result;
    try {
        result = run_batch(input, cfg);
        write_batch(result, output);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << "\n";
    for (const auto& r : result.records)
        if (r.error)
            std::cerr << "road " << r.campaign << "/" << r.road_id << ": " << to_string(*r.error) << ": "
                      << r.error_message << "\n";

    std::printf("%-24s %7s %9s %7s %7s %7s %7s %9s\n", "campaign", "total", "converted", "errors", "valid", "pass",
                "fail", "wall_s");
    for (const auto& c : result.campaigns)
        std::printf("%-24s %7d %9d %7d %7d %7d %7d %9.3f\n", c.campaign_id.c_str(), c.total, c.converted,
                    c.conversion_errors, c.valid, c.sim_pass, c.sim_fail, c.wall_time);

    if (strict && result.any_conversion_error())
        return kExitStrict;
    return kExitOk;
}
