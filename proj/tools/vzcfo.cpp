#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "vzcfo/cli/commands.hpp"
#include "vzcfo/cli/config.hpp"

namespace {

using vz::cli::json;

// Loads --config (or an empty object) and overlays command-line flags before
// the single parse, so presets follow the final objective.
json base_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(vz::cli::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw vz::ConfigError(path + ": not valid JSON: " + e.what());
    }
}

void apply_z0(json& j, const std::string& flag) {
    const vz::cli::Z0Setting z = vz::cli::parse_z0_flag(flag);
    if (z.fixed)
        j["z0"] = {{"mode", "fixed"}, {"value", z.value}};
    else
        j["z0"] = {{"mode", "range"}, {"min", z.min}, {"max", z.max}};
}

void apply_engine(json& j, const std::string& flag) {
    std::string engine = flag;
    if (engine.empty()) {
        if (const char* env = std::getenv("VZCFO_NEC_ENGINE")) engine = env;
    }
    if (engine.empty()) return;
    if (!j.contains("solver")) j["solver"] = json::object();
    j["solver"]["engine"] = engine;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CFO optimizer, thin-wire Yagi-Uda solver and NEC interchange tools"};
    app.require_subcommand(1);

    std::string config_path, objective, z0_flag, out_dir, engine, thresholds;
    double f_start = 0, f_stop = 0, f_step = 0;

    auto* opt = app.add_subcommand("optimize", "run a CFO sweep on a benchmark or the Yagi objective");
    opt->add_option("--config", config_path, "JSON run configuration");
    opt->add_option("--objective", objective, "benchmark name or 'yagi'");
    opt->add_option("--z0", z0_flag, "fixed:V or range:LO,HI");
    opt->add_option("--out", out_dir, "output directory");
    opt->add_option("--engine", engine, "external NEC command or 'internal'");
    opt->add_option("--thresholds", thresholds, "comma-separated VSWR thresholds");

    std::string summary_file;
    auto* ana = app.add_subcommand("analyze", "bandwidth and consistency report for a summary table");
    ana->add_option("summary", summary_file, "summary table file")->required();
    ana->add_option("--thresholds", thresholds, "comma-separated VSWR thresholds (default 2,2.5,3)");
    ana->add_option("--out", out_dir, "directory for extracted series");

    std::string geometry_file;
    auto* swp = app.add_subcommand("sweep", "frequency sweep of a geometry file into a summary table");
    swp->add_option("geometry", geometry_file, "geometry table (element, length, boom_dist in wavelengths)")
        ->required();
    swp->add_option("--config", config_path, "JSON run configuration");
    swp->add_option("--z0", z0_flag, "fixed:V");
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--engine", engine, "external NEC command or 'internal'");
    swp->add_option("--start", f_start, "start frequency, MHz");
    swp->add_option("--stop", f_stop, "stop frequency, MHz");
    swp->add_option("--step", f_step, "frequency step, MHz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : vz::cli::kConfigFailure;
    }

    if (*ana) {
        std::vector<double> t{2.0, 2.5, 3.0};
        if (ana->count("--thresholds")) {
            try {
                t = vz::cli::parse_threshold_list(thresholds);
            } catch (const vz::ConfigError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return vz::cli::kConfigFailure;
            }
        }
        return vz::cli::cmd_analyze(summary_file, t, out_dir, std::cout, std::cerr);
    }

    vz::cli::RunConfig cfg;
    std::optional<double> z0_override;
    try {
        json j = base_config(config_path);
        if (!objective.empty()) j["objective"] = objective;
        if (!z0_flag.empty()) {
            apply_z0(j, z0_flag);
            if (*swp) {
                const vz::cli::Z0Setting z = vz::cli::parse_z0_flag(z0_flag);
                if (!z.fixed) throw vz::ConfigError("sweep needs --z0 fixed:V");
                z0_override = z.value;
            }
        }
        if (!out_dir.empty()) j["output_dir"] = out_dir;
        apply_engine(j, engine);
        if (!thresholds.empty()) j["thresholds"] = vz::cli::parse_threshold_list(thresholds);
        if (*swp && (swp->count("--start") || swp->count("--stop") || swp->count("--step"))) {
            if (!j.contains("sweep")) j["sweep"] = json::object();
            if (swp->count("--start")) j["sweep"]["start"] = f_start;
            if (swp->count("--stop")) j["sweep"]["stop"] = f_stop;
            if (swp->count("--step")) j["sweep"]["step"] = f_step;
        }
        cfg = vz::cli::config_from_json(j);
    } catch (const vz::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vz::cli::kConfigFailure;
    }

    if (*opt) return vz::cli::cmd_optimize(cfg, std::cout, std::cerr);
    return vz::cli::cmd_sweep(geometry_file, z0_override, cfg, std::cout, std::cerr);
}
