#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vzcfo/cfo/artifacts.hpp"
#include "vzcfo/cfo/engine.hpp"
#include "vzcfo/cli/config.hpp"
#include "vzcfo/error.hpp"
#include "vzcfo/nec/deck.hpp"
#include "vzcfo/nec/engine.hpp"
#include "vzcfo/nec/radiation_output.hpp"
#include "vzcfo/nec/summary_table.hpp"
#include "vzcfo/objectives/benchmarks.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/util/text.hpp"
#include "vzcfo/yagi/design.hpp"
#include "vzcfo/yagi/sweep.hpp"

namespace vz::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kConfigFailure = 2 };

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + p.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << body;
    if (!f) throw Error("write failed for " + p.string());
}

inline std::filesystem::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
    return dir;
}

// Maps library exceptions onto exit codes; diagnostics go to `err`.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
}

// ---- geometry files -------------------------------------------------------

// Tab-separated rows of element, length and boom distance in
// wavelengths at f_center. An optional "z0<TAB>value" line carries Z0.
inline std::string geometry_table(const yagi::YagiGeometry& g, double z0, const rf::FrequencyPlan& plan) {
    const double lc = plan.lambda_center();
    std::string s = "z0\t" + nec::format_z0(z0) + "\n";
    s += "element\tlength\tboom_dist\n";
    for (std::size_t e = 0; e < g.elements(); ++e)
        s += std::to_string(e + 1) + "\t" + text::format("%.3f", g.element_lengths[e] / lc) + "\t" +
             text::format("%.3f", g.boom_positions[e] / lc) + "\n";
    return s;
}

struct GeometryFile {
    std::vector<double> lengths;    // wavelengths
    std::vector<double> positions;  // wavelengths
    std::optional<double> z0;
};

inline GeometryFile parse_geometry_table(std::string_view body) {
    GeometryFile gf;
    std::size_t line_no = 0;
    for (const std::string& raw : text::lines(body)) {
        ++line_no;
        const std::string_view l = text::trim(raw);
        if (l.empty() || l.front() == '#') continue;
        const auto tok = text::split_ws(l);
        if (tok[0] == "z0") {
            const auto v = tok.size() == 2 ? text::to_double(tok[1]) : std::nullopt;
            if (!v) throw ParseError("geometry line " + std::to_string(line_no) + ": bad z0 entry");
            gf.z0 = *v;
            continue;
        }
        if (tok[0] == "element") continue;
        if (tok.size() != 3) throw ParseError("geometry line " + std::to_string(line_no) + ": expected 3 fields");
        const auto idx = text::to_double(tok[0]);
        const auto len = text::to_double(tok[1]);
        const auto pos = text::to_double(tok[2]);
        if (!idx || !len || !pos) throw ParseError("geometry line " + std::to_string(line_no) + ": non-numeric field");
        if (*idx != static_cast<double>(gf.lengths.size() + 1))
            throw ParseError("geometry line " + std::to_string(line_no) + ": elements out of order");
        gf.lengths.push_back(*len);
        gf.positions.push_back(*pos);
    }
    if (gf.lengths.size() < 2) throw ParseError("geometry file needs at least two elements");
    for (std::size_t e = 1; e < gf.positions.size(); ++e)
        if (!(gf.positions[e] > gf.positions[e - 1]))
            throw ParseError("boom positions must increase along the boom");
    return gf;
}

// Decodes through decode_design so rounding matches the optimizer path;
// bounds are opened up to accept any positive geometry.
inline yagi::DecodedDesign decode_geometry_file(const GeometryFile& gf, double z0, const RunConfig& cfg) {
    yagi::DesignBounds b;
    b.elements = gf.lengths.size();
    b.spacing_min = 1e-9;
    b.spacing_max = 1e9;
    b.length_min = 1e-9;
    b.length_max = 1e9;
    b.pin_z0(yagi::round_to(z0, 2));
    std::vector<double> x;
    for (std::size_t e = 1; e < gf.positions.size(); ++e) x.push_back(gf.positions[e] - gf.positions[e - 1]);
    for (double l : gf.lengths) x.push_back(l);
    x.push_back(yagi::round_to(z0, 2));
    yagi::DecodedDesign d = yagi::decode_design(x, cfg.plan, b);
    apply_segmentation(d.geometry, yagi::segment_elements(d.geometry, cfg.segment_mode, cfg.segment_length, cfg.plan));
    return d;
}

// ---- sweeps ---------------------------------------------------------------

// Engine output supplies the forward and rear gains; impedance, azimuth
// extremes and average gain still come from the internal solver.
inline std::vector<rf::SweepRow> external_sweep(const yagi::YagiGeometry& g, double z0, const yagi::FrequencyGrid& grid,
                                                const RunConfig& cfg, const std::string& work_dir) {
    std::vector<rf::SweepRow> rows = yagi::sweep(g, z0, grid, cfg.sweep_threads);
    const std::vector<double> f = grid.points();
    const nec::CardDeck deck = nec::write_deck(g, f, {}, {"vzcfo external sweep"});
    const std::string out = nec::run_external_engine(deck, engine_config(cfg, work_dir));
    const std::vector<nec::GainRow> gains =
        nec::parse_radiation_output(out, {cfg.solver.gain_column, cfg.solver.gain_width});
    if (gains.size() != 2 * f.size())
        throw Error("engine returned " + std::to_string(gains.size()) + " pattern rows, expected " +
                    std::to_string(2 * f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) {
        rows[i].gain_fwd = gains[2 * i].gain_db;
        rows[i].gain_rear = gains[2 * i + 1].gain_db;
        rows[i].fbr = rows[i].gain_fwd - rows[i].gain_rear;
    }
    return rows;
}

inline std::string fitness_text(const rf::FitnessCoefficients& c) {
    auto t = [](double v) { return text::exact(v); };
    return "Fitness = " + t(c.c1) + "*Gfwd(L) - " + t(c.c2) + "*VSWR(L) + " + t(c.c3) + "*Gfwd(M) - " + t(c.c4) +
           "*VSWR(M) + " + t(c.c5) + "*Gfwd(U) - " + t(c.c6) + "*VSWR(U)";
}

inline std::string bandwidth_table(const std::vector<rf::SweepRow>& rows, const std::vector<double>& thresholds,
                                   const rf::BandwidthOptions& opt = {}) {
    std::string s = "threshold\tf1\tf2\tdelta_f\tbw_pct\tuwb\n";
    for (double t : thresholds) {
        const auto r = rf::extract_bandwidth(rows, t, opt);
        if (!r) {
            s += text::format("%.2f", t) + "\tnone\tnone\tnone\tnone\tno\n";
            continue;
        }
        s += text::format("%.2f\t%.3f\t%.3f\t%.3f\t%.3f\t%s\n", t, r->f1, r->f2, r->delta_f, r->bw_pct,
                          rf::is_uwb(*r) ? "yes" : "no");
    }
    return s;
}

// ---- optimize -------------------------------------------------------------

inline int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        const std::filesystem::path dir = prepare_dir(cfg.output_dir);
        write_file(dir / "config.json", config_to_json(cfg).dump(2) + "\n");

        cfo::SweepOutcome res;
        std::size_t dims = 0;
        std::optional<yagi::YagiProblem> problem;
        if (cfg.is_yagi()) {
            problem = cfg.problem();
            const cfo::DecisionSpace space = problem->bounds.space();
            dims = space.dims();
            res = cfo::run_sweep(problem->objective(), space, cfg.cfo);
        } else {
            const objectives::BenchmarkSpec& spec = objectives::lookup(cfg.objective);
            dims = spec.dims;
            res = cfo::run_sweep(spec.fn, spec.space(), cfg.cfo);
        }

        std::string report = cfo::best_report(res, dims, cfg.objective);
        write_file(dir / "runs.tsv", cfo::runs_table(res));
        write_file(dir / "series.tsv", cfo::series_table(res));
        write_file(dir / "coordinates.tsv", cfo::coordinate_dump(res.best_trace));

        if (problem) {
            const yagi::DecodedDesign d = problem->decode(res.best.best_coords);
            write_file(dir / "geometry.tsv", geometry_table(d.geometry, d.z0, cfg.plan));
            std::vector<rf::SweepRow> rows;
            if (cfg.solver.internal())
                rows = yagi::sweep(d.geometry, d.z0, cfg.sweep, cfg.sweep_threads);
            else
                rows = external_sweep(d.geometry, d.z0, cfg.sweep, cfg, (dir / "engine").string());
            nec::SummaryMeta meta;
            meta.run_id = "vzcfo optimize";
            meta.z0 = d.z0;
            meta.fitness_text = fitness_text(cfg.coefficients);
            meta.f_center = cfg.plan.f_center;
            meta.half_span = cfg.plan.half_span;
            meta.notes.push_back(cfg.solver.internal() ? "Solver: internal thin-wire moment method"
                                                       : "Solver: internal impedance, external engine gains");
            write_file(dir / "summary.txt", nec::emit_summary_table(meta, rows));
            write_file(dir / "bandwidth.tsv", bandwidth_table(rows, cfg.thresholds));
            write_file(dir / "deck.nec",
                       nec::write_deck(d.geometry, {cfg.plan.f_center}, {}, {"vzcfo best design"}).text());
            report += "z0\t" + nec::format_z0(d.z0) + "\n";
            report += "note\tthe internal solver differs from NEC-4; the optimum Z0 and fitness are not expected to "
                      "match NEC-4 designs\n";
        }
        write_file(dir / "best.txt", report);
        out << report;
        return static_cast<int>(kOk);
    });
}

// ---- analyze --------------------------------------------------------------

struct AnalysisReport {
    nec::SummaryTable table;
    std::vector<std::pair<double, std::optional<rf::BandwidthReport>>> bandwidth;
    std::size_t vswr_checked = 0;
    std::size_t vswr_consistent = 0;
};

inline AnalysisReport analyze_table(const std::string& body, const std::vector<double>& thresholds) {
    AnalysisReport a;
    a.table = nec::parse_summary_table(body);
    for (double t : thresholds) a.bandwidth.emplace_back(t, rf::extract_bandwidth(a.table.rows, t));
    for (const rf::SweepRow& r : a.table.rows) {
        ++a.vswr_checked;
        const double v = rf::vswr({r.rin, r.xin}, a.table.meta.z0);
        if (std::abs(v - r.vswr) <= 0.01 + 1e-9) ++a.vswr_consistent;
    }
    return a;
}

inline std::string analysis_text(const AnalysisReport& a) {
    std::string s;
    s += "z0\t" + nec::format_z0(a.table.meta.z0) + "\n";
    s += "rows\t" + std::to_string(a.table.rows.size()) + "\n";
    s += "skipped_rows\t" + std::to_string(a.table.warnings.size()) + "\n";
    s += "vswr_consistent\t" + std::to_string(a.vswr_consistent) + "/" + std::to_string(a.vswr_checked) + "\n";
    if (!a.bandwidth.empty()) s += "threshold\tf1\tf2\tdelta_f\tbw_pct\tuwb\n";
    for (const auto& [t, r] : a.bandwidth) {
        if (!r) {
            s += text::format("%.2f", t) + "\tnone\tnone\tnone\tnone\tno\n";
            continue;
        }
        s += text::format("%.2f\t%.1f\t%.1f\t%.1f\t%.2f\t%s\n", t, r->f1, r->f2, r->delta_f, r->bw_pct,
                          rf::is_uwb(*r) ? "yes" : "no");
    }
    return s;
}

inline int cmd_analyze(const std::string& summary_file, const std::vector<double>& thresholds,
                       const std::string& out_dir, std::ostream& out, std::ostream& err) {
    try {
        for (double t : thresholds)
            if (!(t > 1.0)) throw ConfigError("VSWR thresholds must exceed 1");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigFailure;
    }
    // a table that cannot be read or parsed is a runtime failure here
    try {
        std::ifstream f(summary_file, std::ios::binary);
        if (!f) throw ParseError("cannot open " + summary_file);
        std::stringstream ss;
        ss << f.rdbuf();
        const AnalysisReport a = analyze_table(ss.str(), thresholds);
        for (const nec::SummaryWarning& w : a.table.warnings)
            err << summary_file << ":" << w.line << ": warning: " << w.message << "\n";
        const std::string report = analysis_text(a);
        out << report;
        if (!out_dir.empty()) {
            const std::filesystem::path dir = prepare_dir(out_dir);
            write_file(dir / "analysis.txt", report);
            std::string vs = "freq\tvswr\n", gs = "freq\tgain_fwd\tfbr\n", zs = "freq\trin\txin\n";
            for (const rf::SweepRow& r : a.table.rows) {
                vs += text::format("%.2f\t%.2f\n", r.freq, r.vswr);
                gs += text::format("%.2f\t%.2f\t%.2f\n", r.freq, r.gain_fwd, r.fbr);
                zs += text::format("%.2f\t%.2f\t%.2f\n", r.freq, r.rin, r.xin);
            }
            write_file(dir / "vswr.tsv", vs);
            write_file(dir / "gain_fbr.tsv", gs);
            write_file(dir / "impedance.tsv", zs);
        }
        return static_cast<int>(kOk);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
}

// ---- sweep ----------------------------------------------------------------

inline int cmd_sweep(const std::string& geometry_file, std::optional<double> z0_override, const RunConfig& cfg,
                     std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        // a missing input is a runtime failure, a malformed one a usage error
        if (!std::filesystem::is_regular_file(geometry_file)) throw Error("cannot open " + geometry_file);
        GeometryFile gf;
        try {
            gf = parse_geometry_table(read_file(geometry_file));
        } catch (const ParseError& e) {
            throw ConfigError(geometry_file + ": " + e.what());
        }
        std::optional<double> z0 = z0_override ? z0_override : gf.z0;
        if (!z0 && cfg.z0.fixed) z0 = cfg.z0.value;
        if (!z0) throw ConfigError("no Z0 given: use --z0 fixed:V or a z0 line in the geometry file");
        if (!(*z0 > 0.0)) throw ConfigError("Z0 must be positive");
        const yagi::DecodedDesign d = decode_geometry_file(gf, *z0, cfg);

        const std::filesystem::path dir = prepare_dir(cfg.output_dir);
        std::vector<rf::SweepRow> rows;
        if (cfg.solver.internal())
            rows = yagi::sweep(d.geometry, d.z0, cfg.sweep, cfg.sweep_threads);
        else
            rows = external_sweep(d.geometry, d.z0, cfg.sweep, cfg, (dir / "engine").string());
        nec::SummaryMeta meta;
        meta.run_id = "vzcfo sweep " + std::filesystem::path(geometry_file).filename().string();
        meta.z0 = d.z0;
        meta.fitness_text = fitness_text(cfg.coefficients);
        meta.f_center = cfg.plan.f_center;
        meta.half_span = cfg.plan.half_span;
        const std::string table = nec::emit_summary_table(meta, rows);
        write_file(dir / "summary.txt", table);
        out << "rows\t" << rows.size() << "\nsummary\t" << (dir / "summary.txt").string() << "\n";
        return static_cast<int>(kOk);
    });
}

}  // namespace vz::cli
