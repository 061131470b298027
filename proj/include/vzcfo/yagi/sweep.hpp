#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "vzcfo/cfo/engine.hpp"
#include "vzcfo/error.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/util/text.hpp"
#include "vzcfo/yagi/design.hpp"
#include "vzcfo/yagi/mom.hpp"

namespace vz::yagi {

struct FrequencyGrid {
    double start = 200.0;
    double stop = 400.0;
    double step = 0.1;

    void validate() const {
        if (!(step > 0.0)) throw ConfigError("frequency step must be positive");
        if (!(start > 0.0)) throw ConfigError("start frequency must be positive");
        if (!(stop >= start)) throw ConfigError("stop frequency below start frequency");
    }
    std::vector<double> points() const {
        validate();
        const long n = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> f;
        f.reserve(static_cast<std::size_t>(n));
        // snap to 1e-9 MHz so 200 + 3*0.1 prints the same as 200.3
        for (long i = 0; i < n; ++i) f.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
        return f;
    }
    bool operator==(const FrequencyGrid&) const = default;
};

inline rf::SweepRow make_row(double freq, const SolveResult& r, double z0) {
    rf::SweepRow row;
    row.freq = freq;
    row.rad_eff = 100.0;
    row.gain_fwd = r.gain_fwd;
    row.gain_rear = r.gain_rear;
    row.fbr = r.gain_fwd - r.gain_rear;
    row.gain_max = r.gain_max;
    row.gain_min = r.gain_min;
    row.rin = r.zin.resistance;
    row.xin = r.zin.reactance;
    row.vswr = rf::vswr(r.zin, z0);
    row.avg_pwr_gain = r.avg_pwr_gain;
    return row;
}

// Rows ascend in frequency regardless of thread count; frequency i goes to
// worker i % threads.
inline std::vector<rf::SweepRow> sweep(const YagiGeometry& g, double z0, const FrequencyGrid& grid,
                                       unsigned threads = 1, const SolverOptions& opt = {}) {
    if (!(z0 > 0.0)) throw ConfigError("Z0 must be positive");
    const std::vector<double> f = grid.points();
    std::vector<rf::SweepRow> rows(f.size());
    std::vector<std::exception_ptr> errors(f.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < f.size(); i += stride) {
            try {
                rows[i] = make_row(f[i], solve_frequency(g, f[i], PatternDetail::full, opt), z0);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::max<std::size_t>(1, std::min<std::size_t>(threads, f.size()));
    if (nt == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw SolverError("at " + text::format("%.4f", f[i]) + " MHz: " + e.what());
        }
    }
    return rows;
}

struct YagiProblem {
    rf::FrequencyPlan plan;
    rf::FitnessCoefficients coefficients;
    DesignBounds bounds;
    SegmentMode segment_mode = SegmentMode::variable;
    double segment_length = 0.05;  // wavelengths, fixed mode only
    SolverOptions solver;

    DecodedDesign decode(const std::vector<double>& x) const {
        DecodedDesign d = decode_design(x, plan, bounds);
        apply_segmentation(d.geometry, segment_elements(d.geometry, segment_mode, segment_length, plan));
        return d;
    }

    // Three solves per call: f_lower, f_center, f_upper.
    double fitness(const std::vector<double>& x) const {
        const DecodedDesign d = decode(x);
        auto at = [&](double f) {
            const SolveResult r = solve_frequency(d.geometry, f, PatternDetail::gains_only, solver);
            return rf::GainVswr{r.gain_fwd, rf::vswr(r.zin, d.z0)};
        };
        return rf::yagi_fitness(coefficients, at(plan.f_lower()), at(plan.f_center), at(plan.f_upper()));
    }

    cfo::Objective objective() const {
        auto self = std::make_shared<const YagiProblem>(*this);
        return [self](const std::vector<double>& x) { return self->fitness(x); };
    }
};

}  // namespace vz::yagi
