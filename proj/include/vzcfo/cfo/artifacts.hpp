#pragma once

#include <string>
#include <vector>

#include "vzcfo/cfo/engine.hpp"
#include "vzcfo/util/text.hpp"

// Plain-text renderings of sweep results. Numbers use the shortest
// round-trip form so reruns compare byte for byte.
namespace vz::cfo {

inline std::string join_exact(const std::vector<double>& v, const char* sep = "\t") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += text::exact(v[i]);
    }
    return s;
}

inline std::string best_report(const SweepOutcome& out, std::size_t dims, const std::string& objective) {
    const RunResult& b = out.best;
    const std::size_t np = static_cast<std::size_t>(b.probes_per_dim) * dims;
    std::string s;
    s += "objective\t" + objective + "\n";
    s += "best_fitness\t" + text::exact(b.best_fitness) + "\n";
    s += "best_probe\t" + std::to_string(b.best_probe + 1) + "\n";
    s += "best_step\t" + std::to_string(b.best_step) + "\n";
    s += "gamma\t" + text::exact(b.gamma) + "\n";
    s += "probes_per_dim\t" + std::to_string(b.probes_per_dim) + "\n";
    s += "probes\t" + std::to_string(np) + "\n";
    s += "dims\t" + std::to_string(dims) + "\n";
    s += "last_step\t" + std::to_string(b.last_step) + "\n";
    s += "evaluations\t" + std::to_string(b.evaluations) + "\n";
    s += "total_evaluations\t" + std::to_string(out.total_evaluations) + "\n";
    s += "runs\t" + std::to_string(out.runs.size()) + "\n";
    s += "best_coords\t" + join_exact(b.best_coords) + "\n";
    return s;
}

// One line per run of the sweep grid.
inline std::string runs_table(const SweepOutcome& out) {
    std::string s = "run\tprobes_per_dim\tgamma\tbest_fitness\tbest_probe\tbest_step\tlast_step\tevaluations\n";
    for (std::size_t n = 0; n < out.runs.size(); ++n) {
        const RunResult& r = out.runs[n];
        s += std::to_string(n + 1) + "\t" + std::to_string(r.probes_per_dim) + "\t" + text::exact(r.gamma) + "\t" +
             text::exact(r.best_fitness) + "\t" + std::to_string(r.best_probe + 1) + "\t" +
             std::to_string(r.best_step) + "\t" + std::to_string(r.last_step) + "\t" +
             std::to_string(r.evaluations) + "\n";
    }
    return s;
}

// Per-step best fitness, best probe and Davg for every run.
inline std::string series_table(const SweepOutcome& out) {
    std::string s = "run\tstep\tbest_fitness\tbest_probe\tdavg\n";
    for (std::size_t n = 0; n < out.series.size(); ++n) {
        const RunSeries& r = out.series[n];
        for (std::size_t j = 0; j < r.best_fitness_per_step.size(); ++j)
            s += std::to_string(n + 1) + "\t" + std::to_string(j) + "\t" + text::exact(r.best_fitness_per_step[j]) +
                 "\t" + std::to_string(r.best_probe_per_step[j] + 1) + "\t" + text::exact(r.davg_per_step[j]) + "\n";
    }
    return s;
}

// Every probe position and fitness of the winning run.
inline std::string coordinate_dump(const RunTrace& t) {
    std::string s = "step\tprobe\tfitness";
    const std::size_t nd = t.positions.empty() ? 0 : t.positions.front().dims();
    for (std::size_t i = 0; i < nd; ++i) s += "\tx" + std::to_string(i + 1);
    s += "\n";
    for (std::size_t j = 0; j < t.steps(); ++j)
        for (std::size_t p = 0; p < t.probes(); ++p)
            s += std::to_string(j) + "\t" + std::to_string(p + 1) + "\t" + text::exact(t.fitness[j][p]) + "\t" +
                 join_exact(t.positions[j].row(p)) + "\n";
    return s;
}

}  // namespace vz::cfo
