#pragma once

#include <cstddef>
#include <vector>

namespace vz::cfo {

// Row-major [probe][dim] matrix.
class ProbeMatrix {
public:
    ProbeMatrix() = default;
    ProbeMatrix(std::size_t np, std::size_t nd, double fill = 0.0)
        : np_(np), nd_(nd), v_(np * nd, fill) {}

    std::size_t probes() const noexcept { return np_; }
    std::size_t dims() const noexcept { return nd_; }
    double& operator()(std::size_t p, std::size_t i) { return v_[p * nd_ + i]; }
    double operator()(std::size_t p, std::size_t i) const { return v_[p * nd_ + i]; }
    std::vector<double> row(std::size_t p) const {
        return {v_.begin() + static_cast<std::ptrdiff_t>(p * nd_),
                v_.begin() + static_cast<std::ptrdiff_t>((p + 1) * nd_)};
    }
    const std::vector<double>& data() const noexcept { return v_; }

    bool operator==(const ProbeMatrix&) const = default;

private:
    std::size_t np_ = 0, nd_ = 0;
    std::vector<double> v_;
};

// Histories of one (probes_per_dim, gamma) run, indexed by step 0..last_step.
struct RunTrace {
    std::vector<ProbeMatrix> positions;
    std::vector<ProbeMatrix> accelerations;
    std::vector<std::vector<double>> fitness;  // [step][probe]
    std::vector<std::vector<double>> lower;    // working bounds in force at each step
    std::vector<std::vector<double>> upper;
    std::vector<double> best_fitness_per_step;
    std::vector<std::size_t> best_probe_per_step;
    std::vector<double> davg_per_step;
    int last_step = 0;

    std::size_t probes() const { return fitness.empty() ? 0 : fitness.front().size(); }
    std::size_t steps() const { return fitness.size(); }
    double fitness_at(std::size_t p, std::size_t j) const { return fitness[j][p]; }

    bool operator==(const RunTrace&) const = default;
};

// Probe indices are zero-based; reports print them one-based.
struct RunResult {
    double best_fitness = 0.0;
    std::size_t best_probe = 0;
    std::size_t best_step = 0;
    std::vector<double> best_coords;
    double gamma = 0.0;
    int probes_per_dim = 0;
    long long evaluations = 0;
    int last_step = 0;

    bool operator==(const RunResult&) const = default;
};

// Per-step series kept for every run of a sweep (full matrices are only
// retained for the winning run).
struct RunSeries {
    std::vector<double> best_fitness_per_step;
    std::vector<std::size_t> best_probe_per_step;
    std::vector<double> davg_per_step;

    bool operator==(const RunSeries&) const = default;
};

}  // namespace vz::cfo
