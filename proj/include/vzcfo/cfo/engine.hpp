#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vzcfo/cfo/decision_space.hpp"
#include "vzcfo/cfo/params.hpp"
#include "vzcfo/cfo/trace.hpp"
#include "vzcfo/error.hpp"

namespace vz::cfo {

inline ProbeMatrix init_probe_lines(const DecisionSpace& space, int probes_per_dim, double gamma) {
    if (probes_per_dim < 2) throw ConfigError("probes_per_dim must be at least 2");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
    const std::size_t nd = space.dims();
    const auto ppd = static_cast<std::size_t>(probes_per_dim);
    ProbeMatrix r(ppd * nd, nd);
    for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t p = 0; p < r.probes(); ++p)
            r(p, i) = space.lower(i) + gamma * (space.upper(i) - space.lower(i));
    for (std::size_t i = 0; i < nd; ++i) {
        const double dx = (space.upper(i) - space.lower(i)) / static_cast<double>(ppd - 1);
        for (std::size_t k = 0; k < ppd; ++k) r(k + ppd * i, i) = space.lower(i) + static_cast<double>(k) * dx;
    }
    return r;
}

inline double unit_step(double x) { return x >= 0.0 ? 1.0 : 0.0; }

inline ProbeMatrix compute_accelerations(const ProbeMatrix& r, const std::vector<double>& m,
                                         double alpha, double beta) {
    const std::size_t np = r.probes(), nd = r.dims();
    ProbeMatrix a(np, nd);
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t k = 0; k < np; ++k) {
            if (k == p) continue;
            const double dm = m[k] - m[p];
            if (unit_step(dm) == 0.0) continue;
            double sum_sq = 0.0;
            for (std::size_t l = 0; l < nd; ++l) {
                const double d = r(k, l) - r(p, l);
                sum_sq += d * d;
            }
            if (sum_sq == 0.0) continue;
            const double factor =
                std::pow(dm, alpha) / std::pow(std::sqrt(sum_sq), beta);
            for (std::size_t i = 0; i < nd; ++i) a(p, i) += (r(k, i) - r(p, i)) * factor;
        }
    }
    return a;
}

inline ProbeMatrix update_positions(const ProbeMatrix& r_prev, const ProbeMatrix& a_prev,
                                    double step_coefficient) {
    ProbeMatrix r = r_prev;
    for (std::size_t p = 0; p < r.probes(); ++p)
        for (std::size_t i = 0; i < r.dims(); ++i) r(p, i) += step_coefficient * a_prev(p, i);
    return r;
}

inline void retrieve_errant_simple(ProbeMatrix& r, const ProbeMatrix& r_prev,
                                   const DecisionSpace& space, double frep) {
    for (std::size_t p = 0; p < r.probes(); ++p) {
        for (std::size_t i = 0; i < r.dims(); ++i) {
            const double lo = space.lower(i), hi = space.upper(i);
            if (r(p, i) < lo) r(p, i) = std::max(lo + frep * (r_prev(p, i) - lo), lo);
            if (r(p, i) > hi) r(p, i) = std::min(hi - frep * (hi - r_prev(p, i)), hi);
        }
    }
}

inline void retrieve_errant_directional(ProbeMatrix& r, const ProbeMatrix& r_prev,
                                        const ProbeMatrix& a_prev, const DecisionSpace& space,
                                        double frep) {
    const std::size_t nd = r.dims();
    for (std::size_t p = 0; p < r.probes(); ++p) {
        bool errant = false;
        for (std::size_t i = 0; i < nd && !errant; ++i) {
            const bool outside = r(p, i) > space.upper(i) || r(p, i) < space.lower(i);
            errant = outside && a_prev(p, i) != 0.0;
        }
        if (!errant) continue;

        double eta_star = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nd; ++i) {
            if (a_prev(p, i) == 0.0) continue;
            for (double bound : {space.lower(i), space.upper(i)}) {
                const double eta = (bound - r_prev(p, i)) / a_prev(p, i);
                if (eta <= eta_star && eta >= 0.0) eta_star = eta;
            }
        }
        if (!std::isfinite(eta_star)) continue;  // keep the simple-retrieval result

        double sum_sq = 0.0;
        for (std::size_t i = 0; i < nd; ++i) sum_sq += a_prev(p, i) * a_prev(p, i);
        const double mag = std::sqrt(sum_sq);
        const double d_max = eta_star * mag;
        for (std::size_t i = 0; i < nd; ++i)
            r(p, i) = r_prev(p, i) + frep * d_max * a_prev(p, i) / mag;
    }
}

// Final containment pass: both retrievals reference the previous
// step, which may itself lie outside a freshly shrunk box.
inline void clamp_to_space(ProbeMatrix& r, const DecisionSpace& space) {
    for (std::size_t p = 0; p < r.probes(); ++p)
        for (std::size_t i = 0; i < r.dims(); ++i)
            r(p, i) = std::clamp(r(p, i), space.lower(i), space.upper(i));
}

inline double advance_frep(double frep, const CfoParams& params) {
    double next = frep + params.frep_delta;
    if (next > 1.0) next = params.frep_min;
    return next;
}

struct BestIndex {
    double fitness;
    std::size_t probe;
    std::size_t step;
};

// Scan steps 0..j, probes in order; `>=` lets the later candidate win ties.
inline BestIndex best_through_step(const std::vector<std::vector<double>>& m, std::size_t j) {
    BestIndex b{m[0][0], 0, 0};
    for (std::size_t k = 0; k <= j; ++k)
        for (std::size_t p = 0; p < m[k].size(); ++p)
            if (m[k][p] >= b.fitness) b = {m[k][p], p, k};
    return b;
}

inline BestIndex best_at_step(const std::vector<double>& mk, std::size_t k) {
    BestIndex b{-std::numeric_limits<double>::infinity(), 0, k};
    for (std::size_t p = 0; p < mk.size(); ++p)
        if (mk[p] >= b.fitness) b = {mk[p], p, k};
    return b;
}

inline bool fitness_saturated(const std::vector<std::vector<double>>& m, int window, double tol,
                              int j) {
    if (j < window + 10) return false;
    double sum = 0.0, at_j = 0.0;
    for (int k = j - window + 1; k <= j; ++k) {
        const double best = best_at_step(m[static_cast<std::size_t>(k)], static_cast<std::size_t>(k)).fitness;
        if (k == j) at_j = best;
        sum += best;
    }
    return std::abs(sum / window - at_j) <= tol;
}

inline bool fitness_saturated(const RunTrace& trace, int window, double tol, int j) {
    return fitness_saturated(trace.fitness, window, tol, j);
}

// Mean distance, normalised by the principal diagonal, from the best probe of
// step j to every probe at step j.
inline double davg(const std::vector<ProbeMatrix>& r, const std::vector<std::vector<double>>& m,
                   std::size_t j, double diag_length) {
    const std::size_t np = m[j].size();
    if (np < 2) throw ConfigError("davg needs at least two probes");
    if (diag_length == 0.0) return 0.0;
    const std::size_t best = best_at_step(m[j], j).probe;
    double total = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < r[j].dims(); ++i) {
            const double d = r[j](best, i) - r[j](p, i);
            sum_sq += d * d;
        }
        total += std::sqrt(sum_sq);
    }
    return total / (diag_length * static_cast<double>(np - 1));
}

inline double davg(const RunTrace& trace, std::size_t j, double diag_length) {
    return davg(trace.positions, trace.fitness, j, diag_length);
}

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

template <class F>
std::vector<double> evaluate_all(F& objective, const ProbeMatrix& r, std::size_t step) {
    std::vector<double> m(r.probes());
    for (std::size_t p = 0; p < r.probes(); ++p) {
        double v;
        try {
            v = objective(r.row(p));
        } catch (const std::exception& e) {
            throw EvaluationError("objective failed at probe " + std::to_string(p + 1) + ", step " +
                                      std::to_string(step) + ": " + e.what(),
                                  p, step);
        }
        if (std::isnan(v))
            throw EvaluationError("objective returned NaN at probe " + std::to_string(p + 1) +
                                      ", step " + std::to_string(step),
                                  p, step);
        m[p] = v;
    }
    return m;
}

}  // namespace detail

// Runs the time-step loop from an explicit step-0 distribution. `space` is
// taken by value: shrinking is local to the run.
template <class F>
std::pair<RunResult, RunTrace> run_from_positions(F&& objective, DecisionSpace space,
                                                  const CfoParams& params, ProbeMatrix r0,
                                                  double gamma = 0.0, int probes_per_dim = 0) {
    params.validate();
    if (r0.dims() != space.dims()) throw ConfigError("initial positions have wrong dimensionality");
    if (r0.probes() == 0) throw ConfigError("no probes");
    const std::size_t np = r0.probes(), nd = space.dims();

    RunTrace t;
    const auto reserve = static_cast<std::size_t>(params.nt_max) + 1;
    t.positions.reserve(reserve);
    t.accelerations.reserve(reserve);
    t.fitness.reserve(reserve);

    auto record_step = [&](std::size_t j) {
        t.lower.push_back(space.lower());
        t.upper.push_back(space.upper());
        const BestIndex b = best_at_step(t.fitness[j], j);
        t.best_fitness_per_step.push_back(b.fitness);
        t.best_probe_per_step.push_back(b.probe);
        t.davg_per_step.push_back(np >= 2 ? davg(t.positions, t.fitness, j, space.diag_length()) : 0.0);
    };

    t.positions.push_back(std::move(r0));
    t.fitness.push_back(detail::evaluate_all(objective, t.positions[0], 0));
    t.accelerations.emplace_back(np, nd);
    double frep = params.frep_init;
    record_step(0);

    BestIndex run_best{t.fitness[0][0], 0, 0};
    int last_step = params.nt_max;
    for (int step = 1; step <= params.nt_max; ++step) {
        const auto j = static_cast<std::size_t>(step);
        const ProbeMatrix& r_prev = t.positions[j - 1];
        const ProbeMatrix& a_prev = t.accelerations[j - 1];

        ProbeMatrix r = update_positions(r_prev, a_prev, params.step_coefficient);
        retrieve_errant_simple(r, r_prev, space, frep);
        retrieve_errant_directional(r, r_prev, a_prev, space, frep);
        clamp_to_space(r, space);

        std::vector<double> m = detail::evaluate_all(objective, r, j);
        ProbeMatrix a = compute_accelerations(r, m, params.alpha, params.beta);
        t.positions.push_back(std::move(r));
        t.fitness.push_back(std::move(m));
        t.accelerations.push_back(std::move(a));

        const BestIndex b = best_through_step(t.fitness, j);
        if (b.fitness >= run_best.fitness) run_best = b;

        frep = advance_frep(frep, params);

        if (step % params.shrink_interval == 0 && step >= params.shrink_interval) {
            space.shrink(t.positions[b.step].row(b.probe));
            ProbeMatrix& rj = t.positions[j];
            retrieve_errant_simple(rj, t.positions[j - 1], space, frep);
            retrieve_errant_directional(rj, t.positions[j - 1], t.accelerations[j - 1], space, frep);
            clamp_to_space(rj, space);
        }
        record_step(j);

        if (fitness_saturated(t.fitness, params.saturation_window, params.saturation_tol, step)) {
            last_step = step;
            break;
        }
    }
    t.last_step = last_step;

    RunResult res;
    res.best_fitness = run_best.fitness;
    res.best_probe = run_best.probe;
    res.best_step = run_best.step;
    res.best_coords = t.positions[run_best.step].row(run_best.probe);
    res.gamma = gamma;
    res.probes_per_dim = probes_per_dim;
    res.evaluations = static_cast<long long>(np) * (1 + last_step);
    res.last_step = last_step;
    return {std::move(res), std::move(t)};
}

template <class F>
std::pair<RunResult, RunTrace> run_single(F&& objective, const DecisionSpace& space,
                                          const CfoParams& params, int probes_per_dim, double gamma) {
    validate_probes_per_dim(probes_per_dim, space.dims());
    DecisionSpace fresh = space;
    fresh.reset();
    ProbeMatrix r0 = init_probe_lines(fresh, probes_per_dim, gamma);
    return run_from_positions(std::forward<F>(objective), std::move(fresh), params, std::move(r0),
                              gamma, probes_per_dim);
}

struct SweepOutcome {
    RunResult best;
    RunTrace best_trace;
    std::size_t best_run = 0;       // index into `runs`
    std::vector<RunResult> runs;    // canonical order: probes_per_dim outer, gamma inner
    std::vector<RunSeries> series;  // same order as runs
    long long total_evaluations = 0;
};

struct RunSpec {
    int probes_per_dim;
    double gamma;
};

inline std::vector<RunSpec> sweep_grid(const CfoParams& params) {
    std::vector<RunSpec> grid;
    for (int ppd = params.probes_per_dim_min; ppd <= params.probes_per_dim_max; ppd += 2)
        for (int g = 1; g <= params.gamma_count; ++g)
            grid.push_back({ppd, static_cast<double>(g - 1) / static_cast<double>(params.gamma_count - 1)});
    return grid;
}

// `objective` must be safe to call concurrently when params.threads != 1.
template <class F>
SweepOutcome run_sweep(F&& objective, const DecisionSpace& space, const CfoParams& params) {
    params.validate();
    const std::vector<RunSpec> grid = sweep_grid(params);
    for (const RunSpec& s : grid) validate_probes_per_dim(s.probes_per_dim, space.dims());

    std::vector<RunResult> results(grid.size());
    std::vector<RunSeries> series(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());

    unsigned workers = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));

    // Each worker keeps the full trace of its own best run only. The global
    // winner (ties -> later run) is always the best of the worker that ran it.
    struct Local {
        bool any = false;
        std::size_t run = 0;
        RunTrace trace;
    };
    std::vector<Local> local(workers);

    auto work = [&](unsigned w) {
        for (std::size_t n = w; n < grid.size(); n += workers) {
            try {
                auto [res, tr] = run_single(objective, space, params, grid[n].probes_per_dim, grid[n].gamma);
                series[n] = {tr.best_fitness_per_step, tr.best_probe_per_step, tr.davg_per_step};
                if (!local[w].any || res.best_fitness >= results[local[w].run].best_fitness) {
                    local[w].any = true;
                    local[w].run = n;
                    local[w].trace = std::move(tr);
                }
                results[n] = std::move(res);
            } catch (...) {
                errors[n] = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepOutcome out;
    double overall = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < results.size(); ++n) {
        out.total_evaluations += results[n].evaluations;
        if (results[n].best_fitness >= overall) {
            overall = results[n].best_fitness;
            out.best_run = n;
        }
    }
    out.best = results[out.best_run];
    for (auto& l : local)
        if (l.any && l.run == out.best_run) out.best_trace = std::move(l.trace);
    out.runs = std::move(results);
    out.series = std::move(series);
    return out;
}

}  // namespace vz::cfo
