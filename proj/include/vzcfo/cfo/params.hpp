#pragma once

#include <cstddef>
#include <string>

#include "vzcfo/error.hpp"

namespace vz::cfo {

struct CfoParams {
    double alpha = 1.0;
    double beta = 1.0;
    // G * dt^2 / 2 folded into one multiplier; G and dt below are informational.
    double step_coefficient = 1.0;
    double gravitational_constant = 2.0;
    double time_step = 0.5;
    double frep_init = 0.5;
    double frep_delta = 0.1;
    double frep_min = 0.05;
    int nt_max = 250;
    int gamma_count = 11;
    int probes_per_dim_min = 2;
    int probes_per_dim_max = 6;
    int shrink_interval = 20;
    int saturation_window = 25;
    double saturation_tol = 1e-6;
    // Worker threads for independent runs in a sweep; 0 = hardware concurrency.
    unsigned threads = 0;

    void validate() const {
        if (!(frep_min > 0.0 && frep_min <= frep_init && frep_init <= 1.0))
            throw ConfigError("frep values must satisfy 0 < frep_min <= frep_init <= 1");
        if (!(frep_delta > 0.0)) throw ConfigError("frep_delta must be positive");
        if (gamma_count < 2) throw ConfigError("gamma_count must be at least 2");
        if (nt_max < 5) throw ConfigError("nt_max must be at least 5");
        if (probes_per_dim_min < 2) throw ConfigError("probes_per_dim_min must be at least 2");
        if (probes_per_dim_min > probes_per_dim_max)
            throw ConfigError("probes_per_dim_min exceeds probes_per_dim_max");
        if (shrink_interval < 1) throw ConfigError("shrink_interval must be positive");
        if (saturation_window < 1) throw ConfigError("saturation_window must be positive");
        if (!(saturation_tol >= 0.0)) throw ConfigError("saturation_tol must be nonnegative");
    }

    bool operator==(const CfoParams&) const = default;
};

// Probes-per-dimension must be even in more than one dimension; a 1-D run
// needs at least three probes.
inline void validate_probes_per_dim(int probes_per_dim, std::size_t dims) {
    if (probes_per_dim < 2) throw ConfigError("probes_per_dim must be at least 2");
    if (dims == 1) {
        if (probes_per_dim < 3) throw ConfigError("a 1-D run needs probes_per_dim >= 3");
    } else if (probes_per_dim % 2 != 0) {
        throw ConfigError("probes_per_dim must be even when Nd > 1 (got " +
                          std::to_string(probes_per_dim) + ")");
    }
}

}  // namespace vz::cfo
