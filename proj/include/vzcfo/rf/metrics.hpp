#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vzcfo/error.hpp"

namespace vz::rf {

// Free-space speed of light in m*MHz.
inline constexpr double kSpeedOfLight = 299.792458;
inline constexpr double kInfiniteVswr = 1e9;

struct Impedance {
    double resistance = 0.0;
    double reactance = 0.0;

    std::complex<double> complex() const { return {resistance, reactance}; }
    bool operator==(const Impedance&) const = default;
};

struct FitnessCoefficients {
    double c1 = 0.2, c2 = 4.0, c3 = 1.0, c4 = 8.0, c5 = 1.0, c6 = 0.8;
    bool operator==(const FitnessCoefficients&) const = default;
};

struct FrequencyPlan {
    double f_center = 299.8;
    double half_span = 50.0;

    double f_lower() const { return f_center - half_span; }
    double f_upper() const { return f_center + half_span; }
    double lambda_center() const { return kSpeedOfLight / f_center; }

    void validate() const {
        if (!(f_center > 0.0)) throw ConfigError("f_center must be positive");
        if (!(half_span >= 0.0)) throw ConfigError("half_span must be nonnegative");
        if (!(f_lower() > 0.0)) throw ConfigError("f_center - half_span must be positive");
    }
    bool operator==(const FrequencyPlan&) const = default;
};

struct SweepRow {
    double freq = 0.0;
    double rad_eff = 100.0;
    double gain_fwd = 0.0;
    double gain_rear = 0.0;
    double fbr = 0.0;
    double gain_max = 0.0;
    double gain_min = 0.0;
    double rin = 0.0;
    double xin = 0.0;
    double vswr = 1.0;
    double avg_pwr_gain = 1.0;

    bool operator==(const SweepRow&) const = default;
};

struct BandwidthReport {
    double threshold = 0.0;
    double f1 = 0.0, f2 = 0.0;
    double delta_f = 0.0;
    double bw_pct = 0.0;
};

inline double reflection_magnitude(Impedance z, double z0) {
    if (!(z0 > 0.0)) throw ConfigError("characteristic impedance must be positive");
    const std::complex<double> zc = z.complex();
    return std::abs((zc - z0) / (zc + z0));
}

inline double vswr(Impedance z, double z0) {
    const double g = reflection_magnitude(z, z0);
    if (!(g < 1.0 - 1e-12)) return kInfiniteVswr;
    return std::min((1.0 + g) / (1.0 - g), kInfiniteVswr);
}

struct GainVswr {
    double gain_fwd;
    double vswr;
};

inline double yagi_fitness(const FitnessCoefficients& c, GainVswr lower, GainVswr center, GainVswr upper) {
    return c.c1 * lower.gain_fwd - c.c2 * lower.vswr + c.c3 * center.gain_fwd - c.c4 * center.vswr +
           c.c5 * upper.gain_fwd - c.c6 * upper.vswr;
}

inline double fractional_bandwidth_pct(double f1, double f2) { return 200.0 * (f2 - f1) / (f1 + f2); }

inline bool is_uwb(const BandwidthReport& r) { return r.bw_pct >= 25.0; }

struct BandwidthOptions {
    double f_center = 299.8;
    // Neighbouring samples farther apart than this multiple of the median
    // spacing are treated as a gap in the data.
    double gap_factor = 1.5;
    // Samples per side feeding the gap-bridging cubic fit.
    std::size_t gap_fit_samples = 20;
};

namespace detail {

inline double median_spacing(const std::vector<double>& f) {
    std::vector<double> d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] - f[i - 1]);
    if (d.empty()) return 0.0;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

// Up to n gap-free sample indices starting at `from`, walking in direction `dir`.
inline std::vector<std::size_t> gap_free_run(const std::vector<double>& f, std::size_t from, int dir,
                                             std::size_t n, double max_step) {
    std::vector<std::size_t> idx{from};
    std::size_t i = from;
    while (idx.size() < n) {
        if (dir < 0 && i == 0) break;
        if (dir > 0 && i + 1 >= f.size()) break;
        const std::size_t next = dir < 0 ? i - 1 : i + 1;
        if (std::abs(f[next] - f[i]) > max_step) break;
        idx.push_back(next);
        i = next;
    }
    return idx;
}

// Frequency where the curve crosses `thr` between sample `out` (above) and
// sample `in` (at or below). Adjacent samples: linear interpolation. Across a
// gap: least-squares cubic through the samples flanking the gap.
inline double crossing(const std::vector<double>& f, const std::vector<double>& v, std::size_t out,
                       std::size_t in, double thr, double max_step, std::size_t side_n) {
    const double fa = f[out], fb = f[in], va = v[out], vb = v[in];
    const double linear = fa + (thr - va) * (fb - fa) / (vb - va);
    if (std::abs(fb - fa) <= max_step || va == vb) return linear;

    const int dir_out = out < in ? -1 : 1;
    std::vector<std::size_t> idx = gap_free_run(f, out, dir_out, side_n, max_step);
    for (std::size_t k : gap_free_run(f, in, -dir_out, side_n, max_step)) idx.push_back(k);
    if (idx.size() < 6) return linear;

    const double h = fb - fa;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), 4);
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double t = (f[idx[r]] - fa) / h;
        const auto row = static_cast<Eigen::Index>(r);
        a(row, 0) = 1.0;
        a(row, 1) = t;
        a(row, 2) = t * t;
        a(row, 3) = t * t * t;
        y(row) = v[idx[r]];
    }
    const Eigen::Vector4d c = a.colPivHouseholderQr().solve(y);
    auto poly = [&](double x) {
        const double t = (x - fa) / h;
        return c(0) + t * (c(1) + t * (c(2) + t * c(3)));
    };
    // Walk from the in-band sample toward the out-of-band one; first exceedance wins.
    constexpr int kScan = 4000;
    double x_prev = fb;
    for (int s = 1; s <= kScan; ++s) {
        const double x = fb + (fa - fb) * s / kScan;
        if (poly(x) > thr) {
            double lo = x_prev, hi = x;  // poly(lo) <= thr < poly(hi)
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (poly(mid) <= thr) lo = mid;
                else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        x_prev = x;
    }
    return linear;
}

}  // namespace detail

inline std::optional<BandwidthReport> extract_bandwidth(const std::vector<SweepRow>& rows, double threshold,
                                                        const BandwidthOptions& opt = {}) {
    std::vector<double> f, v;
    for (const SweepRow& r : rows) {
        if (!f.empty() && !(r.freq > f.back())) throw ConfigError("sweep rows must be strictly increasing in frequency");
        f.push_back(r.freq);
        v.push_back(r.vswr);
    }
    const std::size_t n = f.size();

    struct Band {
        std::size_t first, last;
    };
    std::vector<Band> bands;
    for (std::size_t i = 0; i < n;) {
        if (v[i] > threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] <= threshold) ++j;
        bands.push_back({i, j});
        i = j + 1;
    }
    if (bands.empty()) return std::nullopt;

    const Band* pick = nullptr;
    for (const Band& b : bands)
        if (f[b.first] <= opt.f_center && opt.f_center <= f[b.last]) pick = &b;
    if (!pick) {
        pick = &bands.front();
        for (const Band& b : bands)
            if (f[b.last] - f[b.first] > f[pick->last] - f[pick->first]) pick = &b;
    }

    const double max_step = opt.gap_factor * detail::median_spacing(f);
    BandwidthReport rep;
    rep.threshold = threshold;
    rep.f1 = pick->first == 0 ? f[0]
                              : detail::crossing(f, v, pick->first - 1, pick->first, threshold, max_step,
                                                 opt.gap_fit_samples);
    rep.f2 = pick->last + 1 == n ? f[n - 1]
                                : detail::crossing(f, v, pick->last + 1, pick->last, threshold, max_step,
                                                   opt.gap_fit_samples);
    rep.delta_f = rep.f2 - rep.f1;
    rep.bw_pct = fractional_bandwidth_pct(rep.f1, rep.f2);
    return rep;
}

}  // namespace vz::rf
