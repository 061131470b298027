#pragma once

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vzcfo/cfo/params.hpp"
#include "vzcfo/error.hpp"
#include "vzcfo/nec/engine.hpp"
#include "vzcfo/nec/radiation_output.hpp"
#include "vzcfo/objectives/benchmarks.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/util/text.hpp"
#include "vzcfo/yagi/design.hpp"
#include "vzcfo/yagi/sweep.hpp"

namespace vz::cli {

using json = nlohmann::ordered_json;

struct Z0Setting {
    bool fixed = false;
    double value = 50.0;  // fixed mode
    double min = 25.0, max = 250.0;
    bool operator==(const Z0Setting&) const = default;
};

struct SolverSetting {
    std::string engine = "internal";  // or a shell command
    nec::InvocationMode mode = nec::InvocationMode::explicit_files;
    long timeout_ms = 60000;
    std::size_t gain_column = 37;
    std::size_t gain_width = 8;
    bool internal() const { return engine == "internal"; }
    bool operator==(const SolverSetting&) const = default;
};

struct RunConfig {
    std::string objective = "yagi";
    cfo::CfoParams cfo;
    rf::FrequencyPlan plan;
    rf::FitnessCoefficients coefficients;
    Z0Setting z0;
    yagi::DesignBounds geometry;  // z0 fields are driven by `z0`
    yagi::SegmentMode segment_mode = yagi::SegmentMode::variable;
    double segment_length = 0.05;
    SolverSetting solver;
    std::string output_dir = "vzcfo_out";
    yagi::FrequencyGrid sweep;
    std::vector<double> thresholds{2.0, 2.5, 3.0};
    unsigned sweep_threads = 1;

    bool is_yagi() const { return objective == "yagi"; }

    yagi::DesignBounds design_bounds() const {
        yagi::DesignBounds b = geometry;
        if (z0.fixed) {
            b.pin_z0(z0.value);
        } else {
            b.z0_min = z0.min;
            b.z0_max = z0.max;
        }
        return b;
    }

    yagi::YagiProblem problem() const {
        yagi::YagiProblem p;
        p.plan = plan;
        p.coefficients = coefficients;
        p.bounds = design_bounds();
        p.segment_mode = segment_mode;
        p.segment_length = segment_length;
        return p;
    }

    void validate() const {
        cfo.validate();
        if (is_yagi()) {
            plan.validate();
            design_bounds().validate();
            if (z0.fixed && !(z0.value > 0.0)) throw ConfigError("fixed Z0 must be positive");
            if (cfo.probes_per_dim_min % 2 != 0 || cfo.probes_per_dim_max % 2 != 0)
                throw ConfigError("probes_per_dim must be even for a multi-dimensional objective");
        } else {
            (void)objectives::lookup(objective);
        }
        sweep.validate();
        for (double t : thresholds)
            if (!(t > 1.0)) throw ConfigError("VSWR thresholds must exceed 1");
        if (solver.timeout_ms <= 0) throw ConfigError("engine timeout must be positive");
        if (solver.gain_column < 1 || solver.gain_width < 1) throw ConfigError("gain column window must be positive");
        if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    }

    bool operator==(const RunConfig&) const = default;
};

// Benchmarks sweep probes-per-dimension 2..6; the Yagi run pins it at 4.
inline cfo::CfoParams preset_params(const std::string& objective) {
    cfo::CfoParams p;
    if (objective == "yagi") p.probes_per_dim_min = p.probes_per_dim_max = 4;
    return p;
}

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

inline std::string mode_name(nec::InvocationMode m) {
    return m == nec::InvocationMode::legacy_infile ? "legacy" : "explicit";
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    using detail::read;
    detail::reject_unknown(j,
                           {"objective", "cfo", "frequency_plan", "fitness_coefficients", "z0", "geometry_bounds",
                            "segmentation", "solver", "output_dir", "sweep", "thresholds", "sweep_threads"},
                           "config");
    RunConfig c;
    read(j, "objective", c.objective, "config");
    if (c.objective != "yagi") c.objective = objectives::canonical_name(c.objective);
    c.cfo = preset_params(c.objective);
    if (j.contains("cfo")) {
        const json& k = j["cfo"];
        detail::reject_unknown(k,
                               {"alpha", "beta", "step_coefficient", "gravitational_constant", "time_step",
                                "frep_init", "frep_delta", "frep_min", "nt_max", "gamma_count",
                                "probes_per_dim_min", "probes_per_dim_max", "shrink_interval",
                                "saturation_window", "saturation_tol", "threads"},
                               "cfo");
        cfo::CfoParams& p = c.cfo;
        read(k, "alpha", p.alpha, "cfo");
        read(k, "beta", p.beta, "cfo");
        read(k, "step_coefficient", p.step_coefficient, "cfo");
        read(k, "gravitational_constant", p.gravitational_constant, "cfo");
        read(k, "time_step", p.time_step, "cfo");
        read(k, "frep_init", p.frep_init, "cfo");
        read(k, "frep_delta", p.frep_delta, "cfo");
        read(k, "frep_min", p.frep_min, "cfo");
        read(k, "nt_max", p.nt_max, "cfo");
        read(k, "gamma_count", p.gamma_count, "cfo");
        read(k, "probes_per_dim_min", p.probes_per_dim_min, "cfo");
        read(k, "probes_per_dim_max", p.probes_per_dim_max, "cfo");
        read(k, "shrink_interval", p.shrink_interval, "cfo");
        read(k, "saturation_window", p.saturation_window, "cfo");
        read(k, "saturation_tol", p.saturation_tol, "cfo");
        read(k, "threads", p.threads, "cfo");
    }
    if (j.contains("frequency_plan")) {
        const json& k = j["frequency_plan"];
        detail::reject_unknown(k, {"f_center", "half_span"}, "frequency_plan");
        read(k, "f_center", c.plan.f_center, "frequency_plan");
        read(k, "half_span", c.plan.half_span, "frequency_plan");
    }
    if (j.contains("fitness_coefficients")) {
        const json& k = j["fitness_coefficients"];
        detail::reject_unknown(k, {"c1", "c2", "c3", "c4", "c5", "c6"}, "fitness_coefficients");
        auto& f = c.coefficients;
        read(k, "c1", f.c1, "fitness_coefficients");
        read(k, "c2", f.c2, "fitness_coefficients");
        read(k, "c3", f.c3, "fitness_coefficients");
        read(k, "c4", f.c4, "fitness_coefficients");
        read(k, "c5", f.c5, "fitness_coefficients");
        read(k, "c6", f.c6, "fitness_coefficients");
    }
    if (j.contains("z0")) {
        const json& k = j["z0"];
        detail::reject_unknown(k, {"mode", "value", "min", "max"}, "z0");
        std::string mode = "range";
        read(k, "mode", mode, "z0");
        if (mode != "range" && mode != "fixed") throw ConfigError("z0.mode must be 'range' or 'fixed'");
        c.z0.fixed = mode == "fixed";
        read(k, "value", c.z0.value, "z0");
        read(k, "min", c.z0.min, "z0");
        read(k, "max", c.z0.max, "z0");
    }
    if (j.contains("geometry_bounds")) {
        const json& k = j["geometry_bounds"];
        detail::reject_unknown(k, {"elements", "spacing_min", "spacing_max", "length_min", "length_max"},
                               "geometry_bounds");
        read(k, "elements", c.geometry.elements, "geometry_bounds");
        read(k, "spacing_min", c.geometry.spacing_min, "geometry_bounds");
        read(k, "spacing_max", c.geometry.spacing_max, "geometry_bounds");
        read(k, "length_min", c.geometry.length_min, "geometry_bounds");
        read(k, "length_max", c.geometry.length_max, "geometry_bounds");
    }
    if (j.contains("segmentation")) {
        const json& k = j["segmentation"];
        detail::reject_unknown(k, {"mode", "segment_length"}, "segmentation");
        std::string mode = "variable";
        read(k, "mode", mode, "segmentation");
        if (mode != "variable" && mode != "fixed") throw ConfigError("segmentation.mode must be 'variable' or 'fixed'");
        c.segment_mode = mode == "fixed" ? yagi::SegmentMode::fixed : yagi::SegmentMode::variable;
        read(k, "segment_length", c.segment_length, "segmentation");
    }
    if (j.contains("solver")) {
        const json& k = j["solver"];
        detail::reject_unknown(k, {"engine", "mode", "timeout_ms", "gain_column", "gain_width"}, "solver");
        read(k, "engine", c.solver.engine, "solver");
        std::string mode = "explicit";
        read(k, "mode", mode, "solver");
        if (mode != "explicit" && mode != "legacy") throw ConfigError("solver.mode must be 'explicit' or 'legacy'");
        c.solver.mode = mode == "legacy" ? nec::InvocationMode::legacy_infile : nec::InvocationMode::explicit_files;
        read(k, "timeout_ms", c.solver.timeout_ms, "solver");
        read(k, "gain_column", c.solver.gain_column, "solver");
        read(k, "gain_width", c.solver.gain_width, "solver");
    }
    read(j, "output_dir", c.output_dir, "config");
    if (j.contains("sweep")) {
        const json& k = j["sweep"];
        detail::reject_unknown(k, {"start", "stop", "step"}, "sweep");
        read(k, "start", c.sweep.start, "sweep");
        read(k, "stop", c.sweep.stop, "sweep");
        read(k, "step", c.sweep.step, "sweep");
    }
    read(j, "thresholds", c.thresholds, "config");
    read(j, "sweep_threads", c.sweep_threads, "config");
    return c;
}

inline json config_to_json(const RunConfig& c) {
    const cfo::CfoParams& p = c.cfo;
    json j;
    j["objective"] = c.objective;
    j["cfo"] = {{"alpha", p.alpha},
                {"beta", p.beta},
                {"step_coefficient", p.step_coefficient},
                {"gravitational_constant", p.gravitational_constant},
                {"time_step", p.time_step},
                {"frep_init", p.frep_init},
                {"frep_delta", p.frep_delta},
                {"frep_min", p.frep_min},
                {"nt_max", p.nt_max},
                {"gamma_count", p.gamma_count},
                {"probes_per_dim_min", p.probes_per_dim_min},
                {"probes_per_dim_max", p.probes_per_dim_max},
                {"shrink_interval", p.shrink_interval},
                {"saturation_window", p.saturation_window},
                {"saturation_tol", p.saturation_tol},
                {"threads", p.threads}};
    j["frequency_plan"] = {{"f_center", c.plan.f_center}, {"half_span", c.plan.half_span}};
    const auto& f = c.coefficients;
    j["fitness_coefficients"] = {{"c1", f.c1}, {"c2", f.c2}, {"c3", f.c3}, {"c4", f.c4}, {"c5", f.c5}, {"c6", f.c6}};
    j["z0"] = {{"mode", c.z0.fixed ? "fixed" : "range"}, {"value", c.z0.value}, {"min", c.z0.min}, {"max", c.z0.max}};
    j["geometry_bounds"] = {{"elements", c.geometry.elements},
                            {"spacing_min", c.geometry.spacing_min},
                            {"spacing_max", c.geometry.spacing_max},
                            {"length_min", c.geometry.length_min},
                            {"length_max", c.geometry.length_max}};
    j["segmentation"] = {{"mode", c.segment_mode == yagi::SegmentMode::fixed ? "fixed" : "variable"},
                         {"segment_length", c.segment_length}};
    j["solver"] = {{"engine", c.solver.engine},
                   {"mode", detail::mode_name(c.solver.mode)},
                   {"timeout_ms", c.solver.timeout_ms},
                   {"gain_column", c.solver.gain_column},
                   {"gain_width", c.solver.gain_width}};
    j["output_dir"] = c.output_dir;
    j["sweep"] = {{"start", c.sweep.start}, {"stop", c.sweep.stop}, {"step", c.sweep.step}};
    j["thresholds"] = c.thresholds;
    j["sweep_threads"] = c.sweep_threads;
    return j;
}

inline RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

// "fixed:V" or "range:LO,HI".
inline Z0Setting parse_z0_flag(const std::string& s) {
    Z0Setting z;
    auto num = [&](std::string_view v) {
        const auto d = text::to_double(text::trim(v));
        if (!d) throw ConfigError("bad number in --z0 '" + s + "'");
        return *d;
    };
    if (s.rfind("fixed:", 0) == 0) {
        z.fixed = true;
        z.value = num(std::string_view(s).substr(6));
        if (!(z.value > 0.0)) throw ConfigError("fixed Z0 must be positive");
        return z;
    }
    if (s.rfind("range:", 0) == 0) {
        const std::string_view body = std::string_view(s).substr(6);
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) throw ConfigError("--z0 range needs LO,HI");
        z.min = num(body.substr(0, comma));
        z.max = num(body.substr(comma + 1));
        if (!(z.min > 0.0 && z.min <= z.max)) throw ConfigError("--z0 range needs 0 < LO <= HI");
        return z;
    }
    throw ConfigError("--z0 must be fixed:V or range:LO,HI");
}

inline std::vector<double> parse_threshold_list(const std::string& s) {
    std::vector<double> out;
    std::string_view rest = s;
    while (!text::trim(rest).empty()) {
        const auto comma = rest.find(',');
        const std::string_view tok = text::trim(rest.substr(0, comma));
        const auto v = text::to_double(tok);
        if (!v) throw ConfigError("bad threshold '" + std::string(tok) + "'");
        out.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

inline nec::EngineConfig engine_config(const RunConfig& c, const std::string& work_dir) {
    nec::EngineConfig e;
    e.command = c.solver.engine;
    e.mode = c.solver.mode;
    e.work_dir = work_dir;
    e.timeout = std::chrono::milliseconds(c.solver.timeout_ms);
    return e;
}

}  // namespace vz::cli
