#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "vzcfo/yagi/design.hpp"
#include "vzcfo/yagi/mom.hpp"
#include "vzcfo/yagi/sweep.hpp"

using namespace vz::yagi;
using vz::rf::FrequencyPlan;

namespace {

// Composite Simpson, written out here so the oracle shares no code with
// the solver quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double sine_integral(double x) {
    return simpson([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }, 0.0, x);
}

double cosine_integral(double x) {
    constexpr double euler_gamma = 0.57721566490153286;
    return euler_gamma + std::log(x) + simpson([](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; }, 0.0, x);
}

// Induced-EMF drive-point impedance of a thin half-wave dipole.
std::complex<double> induced_emf_half_wave() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double euler_gamma = 0.57721566490153286;
    const double r = kEta0 / (4.0 * std::numbers::pi) * (euler_gamma + std::log(two_pi) - cosine_integral(two_pi));
    const double x = kEta0 / (4.0 * std::numbers::pi) * sine_integral(two_pi);
    return {r, x};
}

YagiGeometry dipole(double length_wl, double radius_wl, int segments, double freq = 299.792458) {
    const double lam = vz::rf::kSpeedOfLight / freq;
    YagiGeometry g;
    g.element_lengths = {length_wl * lam};
    g.boom_positions = {0.0};
    g.radius = radius_wl * lam;
    g.driven_index = 0;
    g.segments_per_element = {segments};
    return g;
}

YagiGeometry reference_design() {
    const double lc = FrequencyPlan{}.lambda_center();
    YagiGeometry g;
    g.element_lengths = {0.562, 0.508, 0.366, 0.358, 0.360, 0.360};
    g.boom_positions = {0, 0.319, 0.459, 0.737, 0.993, 1.231};
    g.radius = kRadiusWavelengths * lc;
    g.driven_index = 1;
    g.segments_per_element.assign(6, kDefaultSegments);
    return g;
}

}  // namespace

TEST(InducedEmfOracle, Value) {
    const auto z = induced_emf_half_wave();
    EXPECT_NEAR(z.real(), 73.08, 0.05);
    EXPECT_NEAR(z.imag(), 42.5, 0.1);
}

// A single piecewise-sinusoidal mode spanning the dipole is the induced-EMF
// current, so the one-segment model must reproduce the closed form.
TEST(Solver, SingleModeMatchesInducedEmf) {
    const auto ref = induced_emf_half_wave();
    const SolveResult r = solve_frequency(dipole(0.5, 1e-5, 1), 299.792458);
    EXPECT_NEAR(r.zin.resistance, ref.real(), 0.002 * ref.real());
    EXPECT_NEAR(r.zin.reactance, ref.imag(), 0.002 * ref.imag());
}

TEST(Solver, HalfWaveDipoleDirectivityAndPower) {
    const SolveResult r = solve_frequency(dipole(0.5, 1e-5, kDefaultSegments), 299.792458);
    EXPECT_NEAR(r.gain_fwd, 2.15, 0.1);
    EXPECT_NEAR(r.gain_rear, r.gain_fwd, 1e-9);
    EXPECT_NEAR(r.gain_max, r.gain_min, 1e-6);
    EXPECT_GE(r.avg_pwr_gain, 0.95);
    EXPECT_LE(r.avg_pwr_gain, 1.05);
    EXPECT_GT(r.zin.resistance, 0.0);
}

TEST(Solver, MeshConvergence) {
    const SolveResult a = solve_frequency(dipole(0.5, 1e-5, 9), 299.792458);
    const SolveResult b = solve_frequency(dipole(0.5, 1e-5, 19), 299.792458);
    const double rel = std::abs(a.zin.complex() - b.zin.complex()) / std::abs(a.zin.complex());
    EXPECT_LT(rel, 0.02);
}

TEST(Solver, ImpedanceMatrixSymmetric) {
    const WireModel m(reference_design());
    const Eigen::MatrixXcd z = m.impedance_matrix(299.8);
    const double scale = z.cwiseAbs().maxCoeff();
    EXPECT_LE((z - z.transpose()).cwiseAbs().maxCoeff(), 1e-9 * scale);
    EXPECT_EQ(m.unknowns(), 54u);
    EXPECT_EQ(m.feed_index(), 9u + 4u);
}

TEST(Solver, PowerConservationOverBand) {
    const YagiGeometry g = reference_design();
    for (double f : {200.0, 249.8, 299.8, 349.8, 400.0}) {
        const SolveResult r = solve_frequency(g, f);
        EXPECT_GE(r.avg_pwr_gain, 0.8) << f;
        EXPECT_LE(r.avg_pwr_gain, 1.2) << f;
    }
}

TEST(Solver, AzimuthPeriodicity) {
    const YagiGeometry g = reference_design();
    const WireModel m(g);
    const SolveResult r = solve_frequency(g, 299.8);
    const double k = WireModel::wavenumber(299.8);
    const auto f = m.wire_factors(k, 0.0, r.currents);
    for (double phi : {0.0, 0.7, 2.0, 3.14159}) {
        const double u1 = m.intensity(k, std::numbers::pi / 2, phi, f);
        const double u2 = m.intensity(k, std::numbers::pi / 2, phi + 2 * std::numbers::pi, f);
        EXPECT_NEAR(u1, u2, 1e-12 * u1);
    }
}

TEST(Solver, YagiRadiatesForward) {
    const SolveResult r = solve_frequency(reference_design(), 299.8);
    EXPECT_GT(r.gain_fwd, r.gain_rear + 5.0);
    EXPECT_GE(r.gain_max, r.gain_fwd - 1e-9);
}

TEST(Solver, GainsOnlyMatchesFull) {
    const SolveResult a = solve_frequency(reference_design(), 281.3, PatternDetail::gains_only);
    const SolveResult b = solve_frequency(reference_design(), 281.3, PatternDetail::full);
    EXPECT_EQ(a.zin, b.zin);
    EXPECT_EQ(a.gain_fwd, b.gain_fwd);
    EXPECT_EQ(a.gain_rear, b.gain_rear);
}

TEST(Solver, CoincidentElementsReported) {
    YagiGeometry g = reference_design();
    g.boom_positions[3] = g.boom_positions[2];
    try {
        solve_frequency(g, 299.8);
        FAIL();
    } catch (const vz::SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("elements 3 and 4"), std::string::npos) << e.what();
    }
    YagiGeometry even = reference_design();
    even.segments_per_element[1] = 8;
    EXPECT_THROW(solve_frequency(even, 299.8), vz::SolverError);
    EXPECT_THROW(solve_frequency(YagiGeometry{}, 299.8), vz::SolverError);
}

TEST(Decode, ReferenceDesignBoomPositions) {
    const FrequencyPlan plan;
    const double lc = plan.lambda_center();
    const std::vector<double> pos{0, 0.319, 0.459, 0.737, 0.993, 1.231};
    const std::vector<double> len{0.562, 0.508, 0.366, 0.358, 0.360, 0.360};
    std::vector<double> x;
    for (std::size_t i = 1; i < pos.size(); ++i) x.push_back((pos[i] - pos[i - 1]) / lc);
    for (double l : len) x.push_back(l / lc);
    x.push_back(105.639);
    const DecodedDesign d = decode_design(x, plan);
    EXPECT_EQ(d.geometry.boom_positions, pos);
    EXPECT_EQ(d.geometry.element_lengths, len);
    EXPECT_EQ(d.z0, 105.64);
    EXPECT_DOUBLE_EQ(d.geometry.radius, 0.00635 * lc);
    EXPECT_EQ(d.geometry.segments_per_element, std::vector<int>(6, 9));
    EXPECT_EQ(d.geometry.driven_index, 1u);
}

TEST(Decode, UnitSpacingsAndUnitWavelength) {
    FrequencyPlan plan;
    plan.f_center = vz::rf::kSpeedOfLight;  // lambda_c = 1 m exactly
    std::vector<double> x(5, 0.1);
    for (int i = 0; i < 6; ++i) x.push_back(0.45);
    x.push_back(50);
    const DecodedDesign d = decode_design(x, plan);
    EXPECT_EQ(d.geometry.boom_positions, (std::vector<double>{0, 0.1, 0.2, 0.3, 0.4, 0.5}));
}

TEST(Decode, RejectsOutOfBoundsWithIndex) {
    std::vector<double> x(5, 0.2);
    for (int i = 0; i < 6; ++i) x.push_back(0.45);
    x.push_back(50);
    x[7] = 0.7;
    try {
        decode_design(x, FrequencyPlan{});
        FAIL();
    } catch (const vz::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("component 8"), std::string::npos);
    }
    EXPECT_THROW(decode_design(std::vector<double>(11, 0.3), FrequencyPlan{}), vz::ConfigError);
}

TEST(Decode, EncodeRoundTrip) {
    const FrequencyPlan plan;
    std::vector<double> x{0.31, 0.17, 0.222, 0.4, 0.35, 0.5, 0.47, 0.41, 0.4, 0.39, 0.385, 77.777};
    const DecodedDesign d = decode_design(x, plan);
    const std::vector<double> back = encode_design(d.geometry, d.z0, plan);
    const DecodedDesign d2 = decode_design(back, plan);
    EXPECT_EQ(d2.geometry, d.geometry);
    EXPECT_EQ(d2.z0, d.z0);
    EXPECT_EQ(encode_design(d2.geometry, d2.z0, plan), back);
}

TEST(Segmentation, VariableAndFixed) {
    FrequencyPlan plan;
    plan.f_center = vz::rf::kSpeedOfLight;
    YagiGeometry g;
    g.element_lengths = {0.5, 0.3};
    const SegmentPlan v = segment_elements(g, SegmentMode::variable, 0.05, plan);
    EXPECT_EQ(v.segments, (std::vector<int>{9, 9}));
    EXPECT_EQ(v.lengths, g.element_lengths);

    const SegmentPlan f = segment_elements(g, SegmentMode::fixed, 0.05, plan);
    EXPECT_EQ(f.segments[0], 11);
    EXPECT_NEAR(f.lengths[0], 0.55, 1e-12);
    EXPECT_EQ(f.segments[1], 7);
    for (int n : f.segments) EXPECT_EQ(n % 2, 1);

    const SegmentPlan fallback = segment_elements(g, SegmentMode::fixed, 0.5, plan);
    EXPECT_EQ(fallback.segments, f.segments);
}

TEST(Sweep, RowCountsAndOrdering) {
    const YagiGeometry g = reference_design();
    const auto one = sweep(g, 105.64, {299.8, 299.8, 0.1});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].freq, 299.8);
    EXPECT_DOUBLE_EQ(one[0].fbr, one[0].gain_fwd - one[0].gain_rear);
    EXPECT_DOUBLE_EQ(one[0].vswr, vz::rf::vswr({one[0].rin, one[0].xin}, 105.64));

    EXPECT_EQ((FrequencyGrid{200, 400, 0.1}).points().size(), 2001u);
    const auto rows = sweep(g, 105.64, {250, 260, 0.5}, 2);
    ASSERT_EQ(rows.size(), 21u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].freq, rows[i - 1].freq);
    EXPECT_EQ(rows, sweep(g, 105.64, {250, 260, 0.5}, 1));
    EXPECT_THROW(sweep(g, 105.64, {250, 260, 0}), vz::ConfigError);
    EXPECT_THROW(sweep(g, 105.64, {260, 250, 1}), vz::ConfigError);
}

TEST(Sweep, FailureCarriesFrequency) {
    YagiGeometry g = reference_design();
    g.boom_positions[1] = 0.0;
    try {
        sweep(g, 50, {300, 301, 1});
        FAIL();
    } catch (const vz::SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("300.0000 MHz"), std::string::npos) << e.what();
    }
}

TEST(YagiObjective, ThreeSolvesAndPinnedZ0) {
    YagiProblem p;
    p.bounds.pin_z0(50);
    const auto space = p.bounds.space();
    EXPECT_EQ(space.dims(), 12u);
    EXPECT_EQ(space.lower(11), 50.0);
    EXPECT_EQ(space.upper(11), 50.0);
    std::vector<double> x{0.3, 0.2, 0.25, 0.3, 0.3, 0.5, 0.47, 0.43, 0.42, 0.42, 0.41, 50};
    const double f = p.fitness(x);
    const DecodedDesign d = p.decode(x);
    auto at = [&](double freq) {
        const SolveResult r = solve_frequency(d.geometry, freq);
        return vz::rf::GainVswr{r.gain_fwd, vz::rf::vswr(r.zin, 50)};
    };
    EXPECT_EQ(f, vz::rf::yagi_fitness({}, at(249.8), at(299.8), at(349.8)));
}
