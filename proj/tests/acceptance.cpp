// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "vzcfo/cfo/artifacts.hpp"
#include "vzcfo/cfo/engine.hpp"
#include "vzcfo/nec/deck.hpp"
#include "vzcfo/nec/summary_table.hpp"
#include "vzcfo/objectives/benchmarks.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/yagi/design.hpp"
#include "vzcfo/yagi/mom.hpp"
#include "vzcfo/yagi/sweep.hpp"

namespace {

using Clock = std::chrono::steady_clock;

const std::string kData = VZCFO_TEST_DATA;

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Verdict {
    bool pass = true;
    std::string detail;
    void check(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [x]");
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int n, const char* name, double budget_s, const std::function<Verdict()>& body) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < budget_s;
    const bool ok = v.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s%s) %s\n", ok ? "PASS" : "FAIL", n, name, secs,
                budget_s, in_time ? "" : ", over budget", v.detail.c_str());
    std::fflush(stdout);
}

const vz::rf::SweepRow& row_at(const vz::nec::SummaryTable& t, double f) {
    for (const auto& r : t.rows)
        if (std::abs(r.freq - f) < 1e-9) return r;
    throw vz::Error("no row at " + vz::text::format("%.2f", f));
}

std::string num(const char* fmt, double v) { return vz::text::format(fmt, v); }

}  // namespace

int main() {
    const auto variable = vz::nec::parse_summary_table(slurp(kData + "/variable_z0_summary.txt"));
    const auto fixed = vz::nec::parse_summary_table(slurp(kData + "/fixed_z0_summary.txt"));

    criterion(1, "VSWR recomputed from Rin, Xin, Z0 within 0.01 on >= 99% of rows", 1.0, [&] {
        Verdict v;
        for (const auto* t : {&variable, &fixed}) {
            std::size_t ok = 0;
            for (const auto& r : t->rows)
                if (std::abs(vz::rf::vswr({r.rin, r.xin}, t->meta.z0) - r.vswr) <= 0.01 + 1e-9) ++ok;
            const double frac = t->rows.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(t->rows.size());
            v.check(frac >= 0.99, "Z0=" + vz::nec::format_z0(t->meta.z0) + ": " + std::to_string(ok) + "/" +
                                      std::to_string(t->rows.size()) + " = " + num("%.2f%%", 100 * frac));
        }
        return v;
    });

    criterion(2, "bandwidth table reproduced from the fixtures", 1.0, [&] {
        struct Row {
            const vz::nec::SummaryTable* t;
            double threshold, f1, f2, df, bw;
            bool uwb;
        };
        const Row rows[] = {{&variable, 2.0, 249.9, 325.7, 75.8, 26.34, true},
                            {&variable, 2.5, 244.0, 331.1, 87.1, 30.29, true},
                            {&variable, 3.0, 240.2, 334.9, 94.7, 32.93, true},
                            {&fixed, 2.0, 263.9, 301.9, 38.0, 13.43, false},
                            {&fixed, 2.5, 258.5, 310.0, 51.5, 18.12, false},
                            {&fixed, 3.0, 254.2, 316.3, 62.1, 21.77, false}};
        Verdict v;
        constexpr double eps = 1e-9;
        for (const Row& e : rows) {
            const auto r = vz::rf::extract_bandwidth(e.t->rows, e.threshold);
            const std::string tag = "Z0=" + vz::nec::format_z0(e.t->meta.z0) + num("@%.1f", e.threshold);
            if (!r) {
                v.check(false, tag + " no band");
                continue;
            }
            const bool ok = std::abs(r->f1 - e.f1) <= 0.1 + eps && std::abs(r->f2 - e.f2) <= 0.1 + eps &&
                            std::abs(r->bw_pct - e.bw) <= 0.1 + eps && vz::rf::is_uwb(*r) == e.uwb;
            v.check(ok, tag + num(" %.1f", r->f1) + num("-%.1f", r->f2) + num(" %.2f%%", r->bw_pct));
        }
        return v;
    });

    criterion(3, "fitness from tabulated rows", 1.0, [&] {
        Verdict v;
        auto gv = [&](double f) {
            const auto& r = row_at(variable, f);
            return vz::rf::GainVswr{r.gain_fwd, r.vswr};
        };
        const double f = vz::rf::yagi_fitness({}, gv(249.8), gv(299.8), gv(349.8));
        v.check(std::abs(f - (-1.174)) <= 0.001, num("fitness %.4f vs -1.174", f));
        v.check(std::abs(f - (-1.189)) <= 0.05, num("gap to -1.189 is %.4f", std::abs(f + 1.189)));
        return v;
    });

    criterion(4, "two yagi sweeps (Nt=50, 3 gammas, internal solver) give byte-identical artifacts", 300.0, [&] {
        vz::yagi::YagiProblem problem;
        vz::cfo::CfoParams p;
        p.nt_max = 50;
        p.gamma_count = 3;
        p.probes_per_dim_min = p.probes_per_dim_max = 4;
        const vz::cfo::DecisionSpace space = problem.bounds.space();
        auto artifacts = [&] {
            const auto out = vz::cfo::run_sweep(problem.objective(), space, p);
            return std::vector<std::string>{vz::cfo::best_report(out, space.dims(), "yagi"),
                                            vz::cfo::runs_table(out), vz::cfo::series_table(out),
                                            vz::cfo::coordinate_dump(out.best_trace)};
        };
        const auto a = artifacts();
        const auto b = artifacts();
        Verdict v;
        v.check(a == b, "artifacts identical");
        const auto pos = a[0].find("best_fitness\t");
        if (pos != std::string::npos) v.detail += "; " + a[0].substr(pos, a[0].find('\n', pos) - pos);
        return v;
    });

    criterion(5, "benchmark optima with default parameters", 120.0, [&] {
        struct Target {
            const char* name;
            double floor;
        };
        const Target targets[] = {
            {"goldstein-price", -3.01}, {"sphere", -1e-4}, {"himmelblau", 199.99}, {"shekel-10", 9.0}};
        Verdict v;
        for (const Target& t : targets) {
            const auto& spec = vz::objectives::lookup(t.name);
            const auto out = vz::cfo::run_sweep(spec.fn, spec.space(), vz::cfo::CfoParams{});
            v.check(out.best.best_fitness >= t.floor, std::string(t.name) + num(" %.6g", out.best.best_fitness));
        }
        return v;
    });

    criterion(6, "two-probe linear trajectory matches the hand oracle to 1e-12", 1.0, [&] {
        vz::cfo::DecisionSpace s({0}, {10});
        vz::cfo::CfoParams p;
        p.nt_max = 5;
        vz::cfo::ProbeMatrix init(2, 1);
        init(0, 0) = 0;
        init(1, 0) = 10;
        auto f = [](const std::vector<double>& x) { return 2.0 * x[0]; };
        auto [res, t] = vz::cfo::run_from_positions(f, s, p, init);
        const double r0[] = {0, 0, 4, 5.8, 6.64, 6.976};
        const double a0[] = {0, 20, 12, 8.4, 6.72, 6.048};
        Verdict v;
        double worst = 0;
        bool shape = t.steps() == 6;
        if (shape)
            for (std::size_t j = 0; j < 6; ++j) {
                worst = std::max({worst, std::abs(t.positions[j](0, 0) - r0[j]), std::abs(t.positions[j](1, 0) - 10),
                                  std::abs(t.accelerations[j](0, 0) - a0[j]), std::abs(t.accelerations[j](1, 0)),
                                  std::abs(t.fitness[j][0] - 2 * r0[j]), std::abs(t.fitness[j][1] - 20),
                                  std::abs(t.davg_per_step[j] - (10 - r0[j]) / 10)});
            }
        v.check(shape && worst <= 1e-12, num("max deviation %.3g", worst));
        v.check(res.best_fitness == 20 && res.best_probe == 1 && res.best_step == 5 && res.evaluations == 12,
                "best probe 2 at step 5, 12 evaluations");
        return v;
    });

    criterion(7, "half-wave dipole sanity", 10.0, [&] {
        const double lam = vz::rf::kSpeedOfLight / 299.792458;
        vz::yagi::YagiGeometry g;
        g.element_lengths = {0.5 * lam};
        g.boom_positions = {0.0};
        g.radius = 1e-5 * lam;
        g.driven_index = 0;
        g.segments_per_element = {vz::yagi::kDefaultSegments};
        const auto r = vz::yagi::solve_frequency(g, 299.792458);
        const std::complex<double> ref(73.0, 42.5);
        const double rel = std::abs(r.zin.complex() - ref) / std::abs(ref);
        const double d = r.gain_max;
        Verdict v;
        v.check(rel <= 0.05, num("Zin %.2f", r.zin.resistance) + num("%+.2fj", r.zin.reactance) + num(" off by %.1f%%", 100 * rel));
        v.check(std::abs(d - 2.15) <= 0.1, num("broadside %.3f dBi", d));
        v.check(r.avg_pwr_gain >= 0.8 && r.avg_pwr_gain <= 1.2, num("avg gain %.4f", r.avg_pwr_gain));
        // informational: a single sinusoidal mode is the induced-EMF current
        g.segments_per_element = {1};
        const auto one = vz::yagi::solve_frequency(g, 299.792458, vz::yagi::PatternDetail::gains_only);
        v.detail += num("; (1-segment Zin %.2f", one.zin.resistance) + num("%+.2fj)", one.zin.reactance);
        return v;
    });

    criterion(8, "interchange round trips", 60.0, [&] {
        Verdict v;
        const vz::rf::FrequencyPlan plan;
        const double lc = plan.lambda_center();
        const std::vector<double> pos{0, 0.319, 0.459, 0.737, 0.993, 1.231};
        const std::vector<double> len{0.562, 0.508, 0.366, 0.358, 0.360, 0.360};
        std::vector<double> x;
        for (std::size_t i = 1; i < pos.size(); ++i) x.push_back((pos[i] - pos[i - 1]) / lc);
        for (double l : len) x.push_back(l / lc);
        x.push_back(105.64);
        const auto d = vz::yagi::decode_design(x, plan);
        v.check(d.geometry.boom_positions == pos, "boom positions decoded exactly");

        const auto rows = vz::yagi::sweep(d.geometry, d.z0, {249.8, 349.8, 10.0});
        vz::nec::SummaryMeta meta;
        meta.z0 = d.z0;
        meta.run_id = "acceptance";
        const auto back = vz::nec::parse_summary_table(vz::nec::emit_summary_table(meta, rows));
        bool same = back.rows.size() == rows.size() && back.warnings.empty();
        for (std::size_t i = 0; same && i < rows.size(); ++i) same = back.rows[i] == vz::nec::round_to_columns(rows[i]);
        bool stable = same && vz::nec::emit_summary_table(meta, back.rows) == vz::nec::emit_summary_table(meta, rows);
        v.check(same && stable, std::to_string(rows.size()) + " rows survive emit and parse");

        const auto deck = vz::nec::write_deck(d.geometry, {299.79564});
        bool fr = false;
        for (const auto& l : deck.lines) fr = fr || l == "FR 0,1,0,0,299.79564,0.";
        v.check(fr, "FR card exact");
        return v;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
