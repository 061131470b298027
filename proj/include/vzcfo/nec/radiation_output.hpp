#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vzcfo/error.hpp"
#include "vzcfo/util/text.hpp"

namespace vz::nec {

struct GainRow {
    double theta = 0.0;
    double phi = 0.0;
    double gain_db = 0.0;  // total power gain
    bool operator==(const GainRow&) const = default;
};

// 1-based column window of the total-gain field. NEC-2 prints
// 1X,F7.2,F9.2,3X,3F8.2 so the third gain column spans 37..44.
struct GainColumns {
    std::size_t first = 37;
    std::size_t width = 8;
};

inline bool starts_numeric(std::string_view line) {
    const auto tok = text::split_ws(line);
    return !tok.empty() && text::to_double(tok[0]).has_value();
}

// True when the line holds two consecutive "DEGREES" tokens.
inline bool is_angle_header(std::string_view line) {
    const auto tok = text::split_ws(line);
    for (std::size_t i = 1; i < tok.size(); ++i)
        if (tok[i - 1] == "DEGREES" && tok[i] == "DEGREES") return true;
    return false;
}

inline std::vector<GainRow> parse_radiation_output(std::string_view text, const GainColumns& cols = {}) {
    const std::vector<std::string> ls = text::lines(text);
    std::vector<GainRow> rows;
    bool found = false;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (!is_angle_header(ls[i])) continue;
        found = true;
        std::size_t k = i + 1;
        while (k < ls.size() && !starts_numeric(ls[k]) && !text::trim(ls[k]).empty()) ++k;
        for (; k < ls.size() && starts_numeric(ls[k]); ++k) {
            const std::string& l = ls[k];
            const auto tok = text::split_ws(l);
            const auto th = tok.size() >= 2 ? text::to_double(tok[0]) : std::nullopt;
            const auto ph = tok.size() >= 2 ? text::to_double(tok[1]) : std::nullopt;
            std::optional<double> g;
            if (l.size() >= cols.first) g = text::to_double(text::trim(std::string_view(l).substr(cols.first - 1, cols.width)));
            if (!th || !ph || !g)
                throw ParseError("line " + std::to_string(k + 1) + ": malformed radiation pattern row");
            rows.push_back({*th, *ph, *g});
        }
        i = k == 0 ? 0 : k - 1;
    }
    if (!found) throw ParseError("no pattern section");
    return rows;
}

}  // namespace vz::nec
