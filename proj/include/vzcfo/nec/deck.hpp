#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vzcfo/error.hpp"
#include "vzcfo/util/text.hpp"
#include "vzcfo/yagi/design.hpp"

namespace vz::nec {

// RP card fields after the mnemonic. The default asks for the theta = 90
// azimuth cut at phi = 0 and 180.
struct PatternRequest {
    int mode = 0;
    int n_theta = 1;
    int n_phi = 2;
    int xnda = 1001;
    double theta0 = 90.0;
    double phi0 = 0.0;
    double dtheta = 0.0;
    double dphi = 180.0;
    double rfld = 1000.0;
};

struct CardDeck {
    std::vector<std::string> lines;
    std::string text() const {
        std::string out;
        for (const auto& l : lines) out += l + "\n";
        return out;
    }
};

inline std::string card_int(long v) { return std::to_string(v); }

inline std::string rp_card(const PatternRequest& rp) {
    using text::card_real;
    return "RP " + card_int(rp.mode) + "," + card_int(rp.n_theta) + "," + card_int(rp.n_phi) + "," +
           card_int(rp.xnda) + "," + card_real(rp.theta0) + "," + card_real(rp.phi0) + "," +
           card_real(rp.dtheta) + "," + card_real(rp.dphi) + "," + card_real(rp.rfld);
}

inline std::string fr_card(std::size_t count, double f0, double df) {
    using text::card_real;
    return "FR 0," + card_int(static_cast<long>(count)) + ",0,0," + card_real(f0) + "," + card_real(df);
}

// One FR card for a uniform list (or a single frequency), otherwise one
// FR/RP pair per frequency.
inline CardDeck write_deck(const yagi::YagiGeometry& g, const std::vector<double>& freqs,
                           const PatternRequest& rp = {}, const std::vector<std::string>& comments = {}) {
    using text::card_real;
    if (g.elements() == 0) throw ConfigError("empty geometry");
    if (freqs.empty()) throw ConfigError("no excitation frequencies");
    if (g.segments_per_element.size() != g.elements() || g.boom_positions.size() != g.elements())
        throw ConfigError("geometry arrays differ in length");
    if (g.driven_index >= g.elements()) throw ConfigError("driven element index out of range");

    CardDeck d;
    for (const auto& c : comments) d.lines.push_back("CM " + c);
    d.lines.push_back("CE");
    for (std::size_t e = 0; e < g.elements(); ++e) {
        const std::string x = card_real(g.boom_positions[e]);
        const std::string h = card_real(g.element_lengths[e] / 2.0);
        d.lines.push_back("GW " + card_int(static_cast<long>(e + 1)) + "," +
                          card_int(g.segments_per_element[e]) + "," + x + ",0.,-" + h + "," + x + ",0.," + h +
                          "," + card_real(g.radius));
    }
    d.lines.push_back("GE");
    d.lines.push_back("EX 0," + card_int(static_cast<long>(g.driven_index + 1)) + "," +
                      card_int(g.segments_per_element[g.driven_index] / 2 + 1) + ",0,1.,0.");

    bool uniform = true;
    const double df = freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0;
    for (std::size_t i = 2; i < freqs.size() && uniform; ++i)
        uniform = std::abs((freqs[i] - freqs[i - 1]) - df) <= 1e-9 * std::max(1.0, std::abs(df));
    if (freqs.size() > 1 && !(df > 0.0)) uniform = false;
    if (uniform) {
        d.lines.push_back(fr_card(freqs.size(), freqs[0], df));
        d.lines.push_back(rp_card(rp));
    } else {
        for (double f : freqs) {
            d.lines.push_back(fr_card(1, f, 0.0));
            d.lines.push_back(rp_card(rp));
        }
    }
    d.lines.push_back("XQ");
    d.lines.push_back("EN");
    return d;
}

}  // namespace vz::nec
