#pragma once

#include <cctype>
#include <cmath>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "vzcfo/error.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/util/text.hpp"

namespace vz::nec {

struct SummaryMeta {
    std::string run_id;
    double z0 = 50.0;
    std::string fitness_text;
    double f_center = 299.8;
    double half_span = 50.0;
    std::vector<std::string> notes;  // extra CM lines, emitted verbatim after the fixed block
};

struct SummaryWarning {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct SummaryTable {
    SummaryMeta meta;
    std::vector<rf::SweepRow> rows;
    std::vector<SummaryWarning> warnings;
};

inline constexpr const char* kSummaryTitle = "FREE SPACE YAGI: SUMMARY NEC DATA";
inline constexpr std::size_t kSummaryFields = 11;
// Three two-decimal values enter the front-to-back identity.
inline constexpr double kFbrTolerance = 0.0151;

namespace detail {

inline std::string strip_markup(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.substr(i, 6) == "\\text{") {
            i += 5;
            continue;
        }
        if (s[i] == '$' || s[i] == '{' || s[i] == '}') continue;
        if (s[i] == '\\') {
            // drop LaTeX commands like \cdot
            while (i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1]))) ++i;
            out += ' ';
            continue;
        }
        out += s[i];
    }
    return out;
}

inline std::string cm_body(std::string_view line) {
    std::string_view t = text::trim(line);
    if (t.size() >= 2 && (t.substr(0, 2) == "CM" || t.substr(0, 2) == "cm")) t.remove_prefix(2);
    return std::string(text::trim(t));
}

inline bool is_cm(std::string_view line) {
    std::string_view t = text::trim(line);
    return t.size() >= 2 && (t.substr(0, 2) == "CM" || t.substr(0, 2) == "cm") &&
           (t.size() == 2 || t[2] == ' ' || t[2] == '\t' || t[2] == ':');
}

}  // namespace detail

inline SummaryTable parse_summary_table(std::string_view input) {
    const std::vector<std::string> ls = text::lines(input);
    SummaryTable out;
    bool have_z0 = false;
    std::size_t header = ls.size();
    static const std::regex z0_re(R"(Z\s*_?\s*[0oO]\s*=\s*([0-9]+(?:\.[0-9]*)?))");
    static const std::regex fc_re(R"(Fc\s*=\s*([0-9]+(?:\.[0-9]*)?))", std::regex::icase);
    static const std::regex span_re(R"(step\s*=\s*([0-9]+(?:\.[0-9]*)?))", std::regex::icase);
    static const std::regex vswr_col_re(R"(VSWR\s*/\s*([0-9]+(?:\.[0-9]*)?))");
    bool in_fitness = false;

    for (std::size_t i = 0; i < ls.size(); ++i) {
        const std::string_view t = text::trim(ls[i]);
        if (t.rfind("F (MHz)", 0) == 0) {
            header = i;
            break;
        }
        if (!detail::is_cm(ls[i])) continue;
        const std::string body = detail::strip_markup(detail::cm_body(ls[i]));
        std::smatch m;
        if (std::regex_search(body, m, z0_re)) {
            out.meta.z0 = *text::to_double(m[1].str());
            have_z0 = true;
            in_fitness = false;
            continue;
        }
        if (body.rfind("Run ID:", 0) == 0) {
            out.meta.run_id = std::string(text::trim(std::string_view(body).substr(7)));
            continue;
        }
        if (body.rfind("Fitness function:", 0) == 0) {
            in_fitness = true;
            continue;
        }
        if (body.rfind("where", 0) == 0) {
            in_fitness = false;
            continue;
        }
        if (in_fitness) {
            if (!out.meta.fitness_text.empty()) out.meta.fitness_text += ' ';
            out.meta.fitness_text += std::string(text::trim(body));
            continue;
        }
        if (std::regex_search(body, m, fc_re)) {
            out.meta.f_center = *text::to_double(m[1].str());
        } else if (std::regex_search(body, m, span_re)) {
            out.meta.half_span = *text::to_double(m[1].str());
        }
    }
    if (header == ls.size()) throw ParseError("summary table: missing 'F (MHz)' column header");
    {
        std::smatch m;
        const std::string& h = ls[header];
        if (std::regex_search(h, m, vswr_col_re)) {
            const double col = *text::to_double(m[1].str());
            if (!have_z0) {
                out.meta.z0 = col;
                have_z0 = true;
            }
        }
    }
    if (!have_z0) throw ParseError("summary table: no 'Z_0 = ... ohms' line in the header block");
    if (!(out.meta.z0 > 0.0)) throw ParseError("summary table: Z_0 must be positive");

    for (std::size_t i = header + 1; i < ls.size(); ++i) {
        const auto tokens = text::split_ws(ls[i]);
        if (tokens.empty()) continue;
        if (!text::to_double(tokens.front())) continue;  // footnotes and other prose
        std::vector<double> v;
        bool numeric = true;
        for (auto tok : tokens) {
            auto d = text::to_double(tok);
            if (!d) {
                numeric = false;
                break;
            }
            v.push_back(*d);
        }
        auto warn = [&](std::string msg) { out.warnings.push_back({i + 1, std::move(msg)}); };
        if (!numeric) {
            warn("non-numeric field; row skipped");
            continue;
        }
        if (v.size() != kSummaryFields) {
            warn("expected 11 fields, found " + std::to_string(v.size()) + "; row skipped");
            continue;
        }
        rf::SweepRow r{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
        if (std::abs(r.gain_fwd - r.gain_rear - r.fbr) > kFbrTolerance) {
            warn("front-to-back ratio disagrees with forward minus rear gain; row skipped");
            continue;
        }
        if (r.vswr < 1.0) {
            warn("VSWR below 1; row skipped");
            continue;
        }
        if (!out.rows.empty() && !(r.freq > out.rows.back().freq)) {
            warn("frequency not increasing; row skipped");
            continue;
        }
        out.rows.push_back(r);
    }
    return out;
}

inline std::string format_z0(double z0) {
    std::string s = text::format("%.2f", z0);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

inline std::string emit_summary_table(const SummaryMeta& meta, const std::vector<rf::SweepRow>& rows) {
    std::string out;
    out += "CM File: YAGI.NEC\n";
    out += " CM YAGI ARRAY IN FREE SPACE\n";
    out += " CM Band center Frequency, Fc = " + text::exact(meta.f_center) + " MHz\n";
    out += " CM Freq step = " + text::exact(meta.half_span) + " MHz +/- Fc\n";
    out += " CM Run ID: " + meta.run_id + "\n";
    out += " CM Fitness function:\n";
    out += " CM " + meta.fitness_text + "\n";
    out += " CM where L,M,U are lower/mid/upper frequencies\n";
    out += " CM Z_0 = " + format_z0(meta.z0) + " ohms\n";
    out += " CM Notes: All dimensions are in METERS.\n";
    for (const std::string& n : meta.notes) out += " CM " + n + "\n";
    out += "\n";
    out += kSummaryTitle;
    out += "\n\n";
    out += "F (MHz)\tRad Eff (%)\tFwd Gain (dbi)\tRear Gain (dbi)\tFB Ratio (db)\tMax Gain (dbi)\tMin Gain "
           "(dbi)\tRin (ohms)\tXin (ohms)\tVSWR/" +
           format_z0(meta.z0) + "\tAvg Pwr Gain**\n";
    for (const rf::SweepRow& r : rows) {
        out += text::format("%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\t%.3f\n", r.freq, r.rad_eff,
                            r.gain_fwd, r.gain_rear, r.fbr, r.gain_max, r.gain_min, r.rin, r.xin, r.vswr,
                            r.avg_pwr_gain);
    }
    out += "\n***IMPORTANT NOTE: AVG PWR GAIN MUST BE IN THE RANGE 0.8-1.2 FOR A VALID MODEL (IDEALLY = 1)!\n";
    return out;
}

// Rounds a row to the emitted column precision.
inline rf::SweepRow round_to_columns(const rf::SweepRow& r) {
    auto r2 = [](double v) { return *text::to_double(text::format("%.2f", v)); };
    auto r3 = [](double v) { return *text::to_double(text::format("%.3f", v)); };
    return {r2(r.freq), r2(r.rad_eff), r2(r.gain_fwd), r2(r.gain_rear), r2(r.fbr), r2(r.gain_max),
            r2(r.gain_min), r2(r.rin), r2(r.xin), r2(r.vswr), r3(r.avg_pwr_gain)};
}

}  // namespace vz::nec
