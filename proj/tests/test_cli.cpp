#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vzcfo/cli/commands.hpp"
#include "vzcfo/cli/config.hpp"

using namespace vz::cli;
namespace fs = std::filesystem;

namespace {

const std::string kData = VZCFO_TEST_DATA;

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("vzcfo_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kReferenceDesign =
    "z0\t105.64\n"
    "element\tlength\tboom_dist\n"
    "1\t0.562\t0.000\n"
    "2\t0.508\t0.319\n"
    "3\t0.366\t0.459\n"
    "4\t0.358\t0.737\n"
    "5\t0.360\t0.993\n"
    "6\t0.360\t1.231\n";

fs::path design_file(const fs::path& dir) {
    const fs::path p = dir / "design.tsv";
    std::ofstream(p) << kReferenceDesign;
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + VZCFO_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    RunConfig c;
    c.objective = "yagi";
    c.cfo = preset_params("yagi");
    EXPECT_EQ(c.cfo.probes_per_dim_min, 4);
    EXPECT_EQ(c.cfo.probes_per_dim_max, 4);
    const RunConfig back = parse_config_text(config_to_json(c).dump());
    EXPECT_EQ(back, c);
}

TEST(Config, NonDefaultRoundTrip) {
    RunConfig c = parse_config_text(R"({"objective":"gp","cfo":{"nt_max":40,"gamma_count":3},
        "z0":{"mode":"fixed","value":75},"solver":{"engine":"nec2c","mode":"legacy","gain_column":30},
        "sweep":{"start":250,"stop":260,"step":0.5},"thresholds":[2.0],"output_dir":"x"})");
    EXPECT_EQ(c.objective, "goldstein-price");
    EXPECT_EQ(c.cfo.nt_max, 40);
    EXPECT_EQ(c.cfo.probes_per_dim_max, 6);
    EXPECT_TRUE(c.z0.fixed);
    EXPECT_EQ(c.solver.mode, vz::nec::InvocationMode::legacy_infile);
    EXPECT_FALSE(c.solver.internal());
    EXPECT_EQ(parse_config_text(config_to_json(c).dump()), c);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config_text(R"({"objetcive":"gp"})"), vz::ConfigError);
    EXPECT_THROW(parse_config_text(R"({"cfo":{"alfa":1}})"), vz::ConfigError);
    EXPECT_THROW(parse_config_text(R"({"z0":{"mode":"floating"}})"), vz::ConfigError);
    EXPECT_THROW(parse_config_text(R"({"objective":"no-such-function"})").validate(), vz::ConfigError);
    EXPECT_THROW(parse_config_text("{not json"), vz::ConfigError);
    EXPECT_THROW(parse_config_text(R"({"cfo":{"nt_max":"many"}})"), vz::ConfigError);
    RunConfig odd = parse_config_text(R"({"cfo":{"probes_per_dim_min":3,"probes_per_dim_max":3}})");
    EXPECT_THROW(odd.validate(), vz::ConfigError);
}

TEST(Config, FlagParsers) {
    const Z0Setting f = parse_z0_flag("fixed:50");
    EXPECT_TRUE(f.fixed);
    EXPECT_EQ(f.value, 50.0);
    const Z0Setting r = parse_z0_flag("range:30,200");
    EXPECT_FALSE(r.fixed);
    EXPECT_EQ(r.min, 30.0);
    EXPECT_EQ(r.max, 200.0);
    EXPECT_THROW(parse_z0_flag("50"), vz::ConfigError);
    EXPECT_THROW(parse_z0_flag("range:30"), vz::ConfigError);
    EXPECT_EQ(parse_threshold_list("2, 2.5,3"), (std::vector<double>{2.0, 2.5, 3.0}));
    EXPECT_THROW(parse_threshold_list("2,,3"), vz::ConfigError);
}

TEST(Config, FixedZ0PinsLastDimension) {
    RunConfig c = parse_config_text(R"({"z0":{"mode":"fixed","value":50}})");
    const vz::cfo::DecisionSpace s = c.problem().bounds.space();
    ASSERT_EQ(s.dims(), 12u);
    EXPECT_EQ(s.lower()[11], 50.0);
    EXPECT_EQ(s.upper()[11], 50.0);
}

TEST(Analyze, VariableFixtureBandwidths) {
    std::stringstream out, err;
    const fs::path dir = scratch("analyze_var");
    ASSERT_EQ(cmd_analyze(kData + "/variable_z0_summary.txt", {2.0, 2.5, 3.0}, dir.string(), out, err), 0)
        << err.str();
    const std::string s = out.str();
    EXPECT_NE(s.find("z0\t105.64\n"), std::string::npos);
    const AnalysisReport a = analyze_table(slurp(kData + "/variable_z0_summary.txt"), {2.0, 2.5, 3.0});
    const double f1[] = {249.9, 244.0, 240.2}, f2[] = {325.7, 331.1, 334.9}, bw[] = {26.34, 30.29, 32.93};
    ASSERT_EQ(a.bandwidth.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& r = a.bandwidth[i].second;
        ASSERT_TRUE(r);
        EXPECT_NEAR(r->f1, f1[i], 0.1 + 1e-9);
        EXPECT_NEAR(r->f2, f2[i], 0.1 + 1e-9);
        EXPECT_NEAR(r->bw_pct, bw[i], 0.1 + 1e-9);
        EXPECT_NE(s.find(vz::text::format("%.2f\t%.1f\t%.1f\t%.1f\t%.2f\tyes\n", a.bandwidth[i].first, r->f1, r->f2,
                                          r->delta_f, r->bw_pct)),
                  std::string::npos)
            << s;
    }
    EXPECT_EQ(slurp(dir / "analysis.txt"), s);
    EXPECT_TRUE(fs::exists(dir / "vswr.tsv"));
    EXPECT_TRUE(fs::exists(dir / "gain_fbr.tsv"));
    EXPECT_TRUE(fs::exists(dir / "impedance.tsv"));
}

TEST(Analyze, FixedFixtureNotUltraWideband) {
    std::stringstream out, err;
    ASSERT_EQ(cmd_analyze(kData + "/fixed_z0_summary.txt", {2.0}, "", out, err), 0);
    EXPECT_NE(out.str().find("2.00\t263.9\t301.9\t38.0\t13.43\tno"), std::string::npos) << out.str();
}

TEST(Analyze, ExitCodes) {
    std::stringstream out, err;
    EXPECT_EQ(cmd_analyze(kData + "/fixed_z0_summary.txt", {}, "", out, err), 0);
    EXPECT_EQ(out.str().find("threshold"), std::string::npos);
    EXPECT_EQ(cmd_analyze(kData + "/does_not_exist.txt", {2.0}, "", out, err), 1);
    EXPECT_EQ(cmd_analyze(kData + "/fixed_z0_summary.txt", {0.5}, "", out, err), 2);
    EXPECT_EQ(cmd_analyze(kData + "/mock_pattern.out", {2.0}, "", out, err), 1);
}

TEST(Sweep, SingleFrequencyInternal) {
    const fs::path dir = scratch("sweep_internal");
    RunConfig c;
    c.output_dir = (dir / "out").string();
    c.sweep = {299.8, 299.8, 0.1};
    std::stringstream out, err;
    ASSERT_EQ(cmd_sweep(design_file(dir).string(), std::nullopt, c, out, err), 0) << err.str();
    const vz::nec::SummaryTable t = vz::nec::parse_summary_table(slurp(dir / "out" / "summary.txt"));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_TRUE(t.warnings.empty());
    EXPECT_EQ(t.meta.z0, 105.64);
    EXPECT_EQ(t.rows[0].freq, 299.8);
    EXPECT_GT(t.rows[0].gain_fwd, 6.0);
    EXPECT_LT(t.rows[0].vswr, 3.0);
}

TEST(Sweep, OverrideAndGeometryErrors) {
    const fs::path dir = scratch("sweep_errors");
    RunConfig c;
    c.output_dir = (dir / "out").string();
    c.sweep = {300, 300, 0.1};
    std::stringstream out, err;
    ASSERT_EQ(cmd_sweep(design_file(dir).string(), 50.0, c, out, err), 0) << err.str();
    EXPECT_EQ(vz::nec::parse_summary_table(slurp(dir / "out" / "summary.txt")).meta.z0, 50.0);

    const fs::path bad = dir / "bad.tsv";
    std::ofstream(bad) << "1\t0.5\t0\n3\t0.4\t0.3\n";
    EXPECT_EQ(cmd_sweep(bad.string(), 50.0, c, out, err), 2);
    EXPECT_EQ(cmd_sweep((dir / "absent.tsv").string(), 50.0, c, out, err), 1);
}

TEST(Sweep, ExternalEngineSuppliesGains) {
    const fs::path dir = scratch("sweep_external");
    RunConfig c;
    c.output_dir = (dir / "out").string();
    c.sweep = {250, 350, 50};
    c.solver.engine = kData + "/mock_nec.sh";
    std::stringstream out, err;
    ASSERT_EQ(cmd_sweep(design_file(dir).string(), std::nullopt, c, out, err), 0) << err.str();
    const vz::nec::SummaryTable t = vz::nec::parse_summary_table(slurp(dir / "out" / "summary.txt"));
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0].gain_fwd, 4.5);
    EXPECT_EQ(t.rows[1].gain_fwd, 5.0);
    EXPECT_EQ(t.rows[2].gain_rear, -3.0);
    EXPECT_EQ(t.rows[2].fbr, 8.5);

    c.solver.engine = kData + "/mock_nec.sh --exit 5";
    EXPECT_EQ(cmd_sweep(design_file(dir).string(), std::nullopt, c, out, err), 1);
    c.solver.engine = "no-such-engine-binary";
    EXPECT_EQ(cmd_sweep(design_file(dir).string(), std::nullopt, c, out, err), 2);
}

TEST(Optimize, GoldsteinPriceArtifacts) {
    const fs::path dir = scratch("opt_gp");
    RunConfig c = parse_config_text(R"({"objective":"goldstein-price"})");
    c.output_dir = (dir / "a").string();
    std::stringstream out, err;
    ASSERT_EQ(cmd_optimize(c, out, err), 0) << err.str();
    const std::string best = slurp(dir / "a" / "best.txt");
    const auto pos = best.find("best_fitness\t");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GE(std::stod(best.substr(pos + 13)), -3.01);
    for (const char* f : {"config.json", "runs.tsv", "series.tsv", "coordinates.tsv"})
        EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_FALSE(fs::exists(dir / "a" / "summary.txt"));

    c.output_dir = (dir / "b").string();
    c.cfo.threads = 3;
    ASSERT_EQ(cmd_optimize(c, out, err), 0);
    for (const char* f : {"best.txt", "runs.tsv", "series.tsv", "coordinates.tsv"})
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}

TEST(Optimize, SmallYagiRunWritesDesignArtifacts) {
    const fs::path dir = scratch("opt_yagi");
    RunConfig c = parse_config_text(R"({"objective":"yagi","cfo":{"nt_max":6,"gamma_count":2},
        "z0":{"mode":"fixed","value":50},"sweep":{"start":290,"stop":310,"step":10}})");
    c.output_dir = dir.string();
    std::stringstream out, err;
    ASSERT_EQ(cmd_optimize(c, out, err), 0) << err.str();
    const vz::nec::SummaryTable t = vz::nec::parse_summary_table(slurp(dir / "summary.txt"));
    EXPECT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.meta.z0, 50.0);
    EXPECT_NE(slurp(dir / "best.txt").find("dims\t12\n"), std::string::npos);
    EXPECT_NE(slurp(dir / "deck.nec").find("FR 0,1,0,0,299.8,0."), std::string::npos);
    const GeometryFile g = parse_geometry_table(slurp(dir / "geometry.tsv"));
    EXPECT_EQ(g.lengths.size(), 6u);
    EXPECT_EQ(*g.z0, 50.0);
    EXPECT_TRUE(fs::exists(dir / "bandwidth.tsv"));
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch("binary");
    const std::string q = "\"";
    EXPECT_EQ(run_cli("analyze " + q + kData + "/variable_z0_summary.txt" + q + " --out " + q + (dir / "a").string() + q), 0);
    EXPECT_TRUE(fs::exists(dir / "a" / "analysis.txt"));
    EXPECT_EQ(run_cli("analyze " + q + (dir / "missing.txt").string() + q), 1);
    EXPECT_EQ(run_cli("analyze " + q + kData + "/variable_z0_summary.txt" + q + " --thresholds 0.9"), 2);
    EXPECT_EQ(run_cli("optimize --objective nonesuch --out " + q + (dir / "o").string() + q), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("optimize --objective sphere --out " + q + (dir / "s").string() + q), 0);
    EXPECT_TRUE(fs::exists(dir / "s" / "best.txt"));
}
