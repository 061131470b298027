#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vzcfo/cfo/decision_space.hpp"
#include "vzcfo/error.hpp"
#include "vzcfo/rf/metrics.hpp"

namespace vz::yagi {

inline constexpr double kRadiusWavelengths = 0.00635;
inline constexpr int kDefaultSegments = 9;

struct YagiGeometry {
    std::vector<double> element_lengths;  // meters
    std::vector<double> boom_positions;   // meters, reflector at 0
    double radius = 0.0;                  // meters
    std::size_t driven_index = 1;         // zero-based; element 2
    std::vector<int> segments_per_element;

    std::size_t elements() const { return element_lengths.size(); }
    bool operator==(const YagiGeometry&) const = default;
};

// Decision-vector layout for N elements: [0, N-1) spacings, [N-1, 2N-1)
// total lengths (both in wavelengths at f_center), [2N-1] Z0 in ohms.
struct DesignBounds {
    std::size_t elements = 6;
    double spacing_min = 0.1, spacing_max = 0.5;
    double length_min = 0.2, length_max = 0.6;
    double z0_min = 25.0, z0_max = 250.0;

    std::size_t dims() const { return 2 * elements; }
    void pin_z0(double z0) { z0_min = z0_max = z0; }

    void validate() const {
        if (elements < 2) throw ConfigError("a Yagi needs at least two elements");
        if (!(0.0 < spacing_min && spacing_min <= spacing_max)) throw ConfigError("bad spacing bounds");
        if (!(0.0 < length_min && length_min <= length_max)) throw ConfigError("bad element length bounds");
        if (!(0.0 < z0_min && z0_min <= z0_max)) throw ConfigError("bad Z0 bounds");
    }

    std::vector<double> lower() const {
        std::vector<double> v(dims());
        for (std::size_t i = 0; i < elements - 1; ++i) v[i] = spacing_min;
        for (std::size_t i = elements - 1; i < dims() - 1; ++i) v[i] = length_min;
        v.back() = z0_min;
        return v;
    }
    std::vector<double> upper() const {
        std::vector<double> v(dims());
        for (std::size_t i = 0; i < elements - 1; ++i) v[i] = spacing_max;
        for (std::size_t i = elements - 1; i < dims() - 1; ++i) v[i] = length_max;
        v.back() = z0_max;
        return v;
    }
    cfo::DecisionSpace space() const {
        validate();
        return {lower(), upper()};
    }

    bool operator==(const DesignBounds&) const = default;
};

struct DecodedDesign {
    YagiGeometry geometry;
    double z0 = 0.0;
};

inline double round_to(double v, int decimals) {
    const double s = std::pow(10.0, decimals);
    return std::round(v * s) / s;
}

inline DecodedDesign decode_design(const std::vector<double>& x, const rf::FrequencyPlan& plan,
                                   const DesignBounds& bounds = {}) {
    if (x.size() != bounds.dims())
        throw ConfigError("design vector has " + std::to_string(x.size()) + " entries, expected " +
                          std::to_string(bounds.dims()));
    const std::vector<double> lo = bounds.lower(), hi = bounds.upper();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(hi[i]));
        if (!(x[i] >= lo[i] - tol && x[i] <= hi[i] + tol))
            throw ConfigError("design component " + std::to_string(i + 1) + " = " + std::to_string(x[i]) +
                              " outside [" + std::to_string(lo[i]) + ", " + std::to_string(hi[i]) + "]");
    }
    const std::size_t n = bounds.elements;
    const double lc = plan.lambda_center();
    DecodedDesign d;
    YagiGeometry& g = d.geometry;
    double pos = 0.0;
    g.boom_positions.push_back(0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        pos += x[i] * lc;
        g.boom_positions.push_back(round_to(pos, 3));
    }
    for (std::size_t i = n - 1; i < 2 * n - 1; ++i) g.element_lengths.push_back(round_to(x[i] * lc, 3));
    g.radius = kRadiusWavelengths * lc;
    g.driven_index = 1;
    g.segments_per_element.assign(n, kDefaultSegments);
    d.z0 = round_to(x.back(), 2);
    return d;
}

// Inverse of decode_design on already-rounded values.
inline std::vector<double> encode_design(const YagiGeometry& g, double z0, const rf::FrequencyPlan& plan) {
    const double lc = plan.lambda_center();
    std::vector<double> x;
    for (std::size_t i = 1; i < g.boom_positions.size(); ++i)
        x.push_back((g.boom_positions[i] - g.boom_positions[i - 1]) / lc);
    for (double l : g.element_lengths) x.push_back(l / lc);
    x.push_back(z0);
    return x;
}

enum class SegmentMode { variable, fixed };

struct SegmentPlan {
    std::vector<int> segments;
    std::vector<double> lengths;  // meters; changed only in fixed mode
};

inline SegmentPlan segment_elements(const YagiGeometry& g, SegmentMode mode, double segment_length_wavelengths,
                                    const rf::FrequencyPlan& plan) {
    SegmentPlan out;
    out.lengths = g.element_lengths;
    if (mode == SegmentMode::variable) {
        out.segments.assign(g.elements(), kDefaultSegments);
        return out;
    }
    double s = segment_length_wavelengths;
    if (!(s >= 0.02 && s <= 0.2)) s = 0.05;
    const double sm = s * plan.lambda_center();
    for (std::size_t e = 0; e < g.elements(); ++e) {
        int n = static_cast<int>(std::lround(g.element_lengths[e] / sm));
        if (n < 1) n = 1;
        if (n % 2 == 0) ++n;
        out.segments.push_back(n);
        out.lengths[e] = n * sm;
    }
    return out;
}

inline void apply_segmentation(YagiGeometry& g, const SegmentPlan& plan) {
    g.segments_per_element = plan.segments;
    g.element_lengths = plan.lengths;
}

}  // namespace vz::yagi
