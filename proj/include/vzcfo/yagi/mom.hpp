#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vzcfo/error.hpp"
#include "vzcfo/rf/metrics.hpp"
#include "vzcfo/util/quadrature.hpp"
#include "vzcfo/yagi/design.hpp"

// Thin-wire moment-method solver for parallel z-directed dipoles centred on
// the x axis. Piecewise-sinusoidal Galerkin with the reduced kernel.
//
// Each element of n segments has n expansion modes peaking at the segment
// centres; the end modes run out to the wire tips, so the mesh nodes are
// {-h, c_1, ..., c_n, +h}. The delta-gap feed sits on the centre mode of the
// driven element (n odd).
namespace vz::yagi {

using cplx = std::complex<double>;

inline constexpr double kEta0 = 376.730313668;  // free-space wave impedance, ohms
inline constexpr double kGainFloorDb = -999.99;

struct SolverOptions {
    int kernel_order = 10;       // Gauss points per sub-segment in the matrix fill
    double pattern_step_deg = 2.0;
    double azimuth_step_deg = 2.0;  // theta = 90 deg cut used for max/min gain
};

struct PatternGrid {
    double step_deg = 2.0;
    std::vector<double> theta_deg;  // cell centres
    std::vector<double> phi_deg;
    std::vector<double> gain;       // linear, theta-major
    double gain_at(std::size_t it, std::size_t ip) const { return gain[it * phi_deg.size() + ip]; }
};

struct SolveResult {
    rf::Impedance zin;
    double gain_fwd = 0.0;   // dBi, theta = 90, phi = 0
    double gain_rear = 0.0;  // dBi, theta = 90, phi = 180
    double gain_max = 0.0;   // dBi over the theta = 90 azimuth cut
    double gain_min = 0.0;
    double avg_pwr_gain = 0.0;
    double input_power = 0.0;  // watts for a 1 V feed
    PatternGrid pattern;
    std::vector<cplx> currents;  // mode amplitudes, element-major
};

inline double to_dbi(double g) {
    if (!(g > 0.0)) return kGainFloorDb;
    return std::max(10.0 * std::log10(g), kGainFloorDb);
}

class WireModel {
public:
    WireModel(const YagiGeometry& g, const SolverOptions& opt = {}) : opt_(opt) {
        const std::size_t n = g.elements();
        if (n == 0) throw SolverError("empty geometry");
        if (g.boom_positions.size() != n || g.segments_per_element.size() != n)
            throw SolverError("geometry arrays differ in length");
        if (g.driven_index >= n) throw SolverError("driven element index out of range");
        if (!(g.radius > 0.0)) throw SolverError("wire radius must be positive");
        for (std::size_t e = 0; e < n; ++e) {
            if (!(g.element_lengths[e] > 0.0))
                throw SolverError("element " + std::to_string(e + 1) + " has nonpositive length");
            if (g.segments_per_element[e] < 1)
                throw SolverError("element " + std::to_string(e + 1) + " has no segments");
        }
        if (g.segments_per_element[g.driven_index] % 2 == 0)
            throw SolverError("driven element needs an odd segment count");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(g.boom_positions[p] - g.boom_positions[q]) < 2.0 * g.radius)
                    throw SolverError("elements " + std::to_string(p + 1) + " and " + std::to_string(q + 1) +
                                      " are coincident (boom separation below one wire diameter)");

        std::size_t offset = 0;
        for (std::size_t e = 0; e < n; ++e) {
            Wire w;
            w.x = g.boom_positions[e];
            const double h = g.element_lengths[e] / 2.0;
            const int ns = g.segments_per_element[e];
            const double delta = 2.0 * h / ns;
            w.z.push_back(-h);
            for (int m = 0; m < ns; ++m) w.z.push_back(-h + (m + 0.5) * delta);
            w.z.push_back(h);
            w.offset = offset;
            offset += static_cast<std::size_t>(ns);
            wires_.push_back(std::move(w));
        }
        unknowns_ = offset;
        radius_ = g.radius;
        feed_ = wires_[g.driven_index].offset + static_cast<std::size_t>(g.segments_per_element[g.driven_index] / 2);
    }

    std::size_t unknowns() const { return unknowns_; }
    std::size_t feed_index() const { return feed_; }

    // Impedance matrix at `freq_mhz`, symmetrised.
    Eigen::MatrixXcd impedance_matrix(double freq_mhz) const {
        const double k = wavenumber(freq_mhz);
        const std::size_t nw = wires_.size();
        Eigen::MatrixXcd zm(static_cast<Eigen::Index>(unknowns_), static_cast<Eigen::Index>(unknowns_));
        const cplx pref(0.0, kEta0 / (4.0 * std::numbers::pi));

        for (std::size_t p = 0; p < nw; ++p) {
            const Wire& wp = wires_[p];
            const std::size_t nsub_p = wp.z.size() - 1;
            for (std::size_t q = 0; q < nw; ++q) {
                const Wire& wq = wires_[q];
                const double rho = p == q ? radius_ : std::abs(wp.x - wq.x);
                // rising[s][j], falling[s][j]: sub-segment s of wire p against node j of wire q
                std::vector<cplx> rising(nsub_p * wq.z.size()), falling(nsub_p * wq.z.size());
                for (std::size_t s = 0; s < nsub_p; ++s)
                    for (std::size_t j = 0; j < wq.z.size(); ++j) {
                        auto [u, d] = segment_integrals(k, wp.z[s], wp.z[s + 1], wq.z[j], rho);
                        rising[s * wq.z.size() + j] = u;
                        falling[s * wq.z.size() + j] = d;
                    }
                const std::size_t modes_p = wp.z.size() - 2, modes_q = wq.z.size() - 2;
                for (std::size_t m = 0; m < modes_p; ++m) {
                    const std::size_t i = m + 1;
                    const double sl = std::sin(k * (wp.z[i] - wp.z[i - 1]));
                    const double sr = std::sin(k * (wp.z[i + 1] - wp.z[i]));
                    check_sin(sl);
                    check_sin(sr);
                    auto tested = [&](std::size_t j) {
                        return rising[(i - 1) * wq.z.size() + j] / sl + falling[i * wq.z.size() + j] / sr;
                    };
                    for (std::size_t nn = 0; nn < modes_q; ++nn) {
                        const std::size_t ii = nn + 1;
                        const double dl = wq.z[ii] - wq.z[ii - 1], dr = wq.z[ii + 1] - wq.z[ii];
                        const double sdl = std::sin(k * dl), sdr = std::sin(k * dr);
                        check_sin(sdl);
                        check_sin(sdr);
                        const double c0 = std::cos(k * dl) / sdl + std::cos(k * dr) / sdr;
                        const cplx v = tested(ii - 1) / sdl + tested(ii + 1) / sdr - c0 * tested(ii);
                        zm(static_cast<Eigen::Index>(wp.offset + m), static_cast<Eigen::Index>(wq.offset + nn)) =
                            pref * v;
                    }
                }
            }
        }
        const Eigen::MatrixXcd sym = 0.5 * (zm + zm.transpose());
        return sym;
    }

    // Mode currents for a 1 V delta gap on the feed mode.
    std::vector<cplx> solve_currents(const Eigen::MatrixXcd& zm) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(unknowns_));
        v(static_cast<Eigen::Index>(feed_)) = 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(zm);
        Eigen::VectorXcd i = lu.solve(v);
        for (Eigen::Index r = 0; r < i.size(); ++r)
            if (!std::isfinite(i(r).real()) || !std::isfinite(i(r).imag()))
                throw SolverError("singular impedance matrix");
        const double resid = (zm * i - v).norm();
        if (!(resid < 1e-6)) throw SolverError("impedance matrix is numerically singular");
        return {i.data(), i.data() + i.size()};
    }

    // sum over wires of exp(j k x_p sin(theta) cos(phi)) * S_p(cos(theta)).
    // Returned per wire so the pattern loop can reuse it across phi.
    std::vector<cplx> wire_factors(double k, double u, const std::vector<cplx>& cur) const {
        std::vector<cplx> out(wires_.size());
        const double beta = k * u;
        for (std::size_t w = 0; w < wires_.size(); ++w) {
            const Wire& wr = wires_[w];
            const std::size_t modes = wr.z.size() - 2;
            cplx acc = 0.0;
            for (std::size_t s = 0; s + 1 < wr.z.size(); ++s) {
                const double za = wr.z[s], zb = wr.z[s + 1], d = zb - za;
                const double sd = std::sin(k * d);
                // mode peaking at zb rises across this sub-segment, the one at za falls
                if (s + 1 >= 1 && s + 1 <= modes)
                    acc += cur[wr.offset + s] * rising_ft(k, beta, za, zb) / sd;
                if (s >= 1 && s <= modes) acc += cur[wr.offset + s - 1] * falling_ft(k, beta, za, zb) / sd;
            }
            out[w] = acc;
        }
        return out;
    }

    // Radiation intensity U(theta, phi) in W/sr.
    double intensity(double k, double theta, double phi, const std::vector<cplx>& factors) const {
        const double st = std::sin(theta);
        cplx f = 0.0;
        for (std::size_t w = 0; w < wires_.size(); ++w) {
            const double ph = k * wires_[w].x * st * std::cos(phi);
            f += factors[w] * cplx(std::cos(ph), std::sin(ph));
        }
        return kEta0 * k * k * st * st * std::norm(f) / (32.0 * std::numbers::pi * std::numbers::pi);
    }

    static double wavenumber(double freq_mhz) { return 2.0 * std::numbers::pi * freq_mhz / rf::kSpeedOfLight; }

    const SolverOptions& options() const { return opt_; }

private:
    struct Wire {
        double x = 0.0;
        std::vector<double> z;  // mesh nodes, n + 2 entries
        std::size_t offset = 0;
    };

    static void check_sin(double s) {
        if (std::abs(s) < 1e-9) throw SolverError("segment length is a multiple of a half wavelength");
    }

    // Integrals of sin(k(z - za)) G and sin(k(zb - z)) G over [za, zb], with
    // G = exp(-jkR)/R and R measured from the point (rho, zs).
    std::pair<cplx, cplx> segment_integrals(double k, double za, double zb, double zs, double rho) const {
        const quad::Rule& rule = quad::gauss_legendre(opt_.kernel_order);
        cplx u = 0.0, d = 0.0;
        const double len = zb - za;
        if (rho < 2.0 * len) {
            // z = zs + rho sinh t makes dz/R = dt and removes the near singularity
            const double ta = std::asinh((za - zs) / rho), tb = std::asinh((zb - zs) / rho);
            const double half = 0.5 * (tb - ta), mid = 0.5 * (tb + ta);
            for (std::size_t g = 0; g < rule.x.size(); ++g) {
                const double t = mid + half * rule.x[g];
                const double z = zs + rho * std::sinh(t);
                const double r = rho * std::cosh(t);
                const cplx e(std::cos(k * r), -std::sin(k * r));
                const double w = rule.w[g] * half;
                u += w * std::sin(k * (z - za)) * e;
                d += w * std::sin(k * (zb - z)) * e;
            }
        } else {
            const double half = 0.5 * len, mid = 0.5 * (za + zb);
            for (std::size_t g = 0; g < rule.x.size(); ++g) {
                const double z = mid + half * rule.x[g];
                const double dz = z - zs;
                const double r = std::sqrt(rho * rho + dz * dz);
                const cplx e = cplx(std::cos(k * r), -std::sin(k * r)) / r;
                const double w = rule.w[g] * half;
                u += w * std::sin(k * (z - za)) * e;
                d += w * std::sin(k * (zb - z)) * e;
            }
        }
        return {u, d};
    }

    // Closed forms of int sin(k(z - za)) e^{j beta z} dz and the falling
    // counterpart; Gauss fallback near beta = +-k.
    static cplx rising_ft(double k, double beta, double za, double zb) {
        const double d = zb - za, den = k * k - beta * beta;
        if (std::abs(den) < 1e-6 * k * k) return gauss_ft(k, beta, za, zb, true);
        const cplx jb(0.0, beta);
        const cplx e_d = std::exp(jb * d);
        const cplx inner = e_d * (jb * std::sin(k * d) - k * std::cos(k * d)) + k;
        return std::exp(jb * za) * inner / den;
    }
    static cplx falling_ft(double k, double beta, double za, double zb) {
        const double d = zb - za, den = k * k - beta * beta;
        if (std::abs(den) < 1e-6 * k * k) return gauss_ft(k, beta, za, zb, false);
        const cplx jb(0.0, beta);
        const cplx e_d = std::exp(-jb * d);
        const cplx inner = e_d * (-jb * std::sin(k * d) - k * std::cos(k * d)) + k;
        return std::exp(jb * zb) * inner / den;
    }
    static cplx gauss_ft(double k, double beta, double za, double zb, bool rising) {
        const quad::Rule& rule = quad::gauss_legendre(16);
        const double half = 0.5 * (zb - za), mid = 0.5 * (za + zb);
        cplx acc = 0.0;
        for (std::size_t g = 0; g < rule.x.size(); ++g) {
            const double z = mid + half * rule.x[g];
            const double s = rising ? std::sin(k * (z - za)) : std::sin(k * (zb - z));
            acc += rule.w[g] * half * s * cplx(std::cos(beta * z), std::sin(beta * z));
        }
        return acc;
    }

    SolverOptions opt_;
    std::vector<Wire> wires_;
    std::size_t unknowns_ = 0;
    std::size_t feed_ = 0;
    double radius_ = 0.0;
};

enum class PatternDetail { gains_only, full };

inline SolveResult solve_frequency(const YagiGeometry& g, double freq_mhz, PatternDetail detail = PatternDetail::full,
                                   const SolverOptions& opt = {}) {
    if (!(freq_mhz > 0.0)) throw SolverError("frequency must be positive");
    const WireModel model(g, opt);
    const Eigen::MatrixXcd zm = model.impedance_matrix(freq_mhz);
    SolveResult res;
    res.currents = model.solve_currents(zm);
    const cplx i_feed = res.currents[model.feed_index()];
    const cplx zin = 1.0 / i_feed;
    res.zin = {zin.real(), zin.imag()};
    res.input_power = 0.5 * i_feed.real();
    if (!(res.input_power > 0.0)) throw SolverError("nonpositive input power; model is unphysical");

    const double k = WireModel::wavenumber(freq_mhz);
    constexpr double pi = std::numbers::pi;
    auto gain = [&](double theta, double phi, const std::vector<cplx>& f) {
        return 4.0 * pi * model.intensity(k, theta, phi, f) / res.input_power;
    };
    const std::vector<cplx> f90 = model.wire_factors(k, 0.0, res.currents);
    res.gain_fwd = to_dbi(gain(pi / 2, 0.0, f90));
    res.gain_rear = to_dbi(gain(pi / 2, pi, f90));
    if (detail == PatternDetail::gains_only) return res;

    double gmax = -std::numeric_limits<double>::infinity(), gmin = std::numeric_limits<double>::infinity();
    const int naz = static_cast<int>(std::lround(360.0 / opt.azimuth_step_deg));
    for (int a = 0; a < naz; ++a) {
        const double gd = to_dbi(gain(pi / 2, a * opt.azimuth_step_deg * pi / 180.0, f90));
        gmax = std::max(gmax, gd);
        gmin = std::min(gmin, gd);
    }
    res.gain_max = gmax;
    res.gain_min = gmin;

    PatternGrid& pg = res.pattern;
    pg.step_deg = opt.pattern_step_deg;
    const int nth = static_cast<int>(std::lround(180.0 / opt.pattern_step_deg));
    const int nph = static_cast<int>(std::lround(360.0 / opt.pattern_step_deg));
    const double dth = pi / nth, dph = 2.0 * pi / nph;
    for (int b = 0; b < nph; ++b) pg.phi_deg.push_back((b + 0.5) * 360.0 / nph);
    pg.gain.reserve(static_cast<std::size_t>(nth) * static_cast<std::size_t>(nph));
    double prad = 0.0;
    for (int a = 0; a < nth; ++a) {
        const double t0 = a * dth, t1 = (a + 1) * dth, tc = 0.5 * (t0 + t1);
        pg.theta_deg.push_back(tc * 180.0 / pi);
        const double solid = (std::cos(t0) - std::cos(t1)) * dph;
        const std::vector<cplx> f = model.wire_factors(k, std::cos(tc), res.currents);
        for (int b = 0; b < nph; ++b) {
            const double u = model.intensity(k, tc, (b + 0.5) * dph, f);
            prad += u * solid;
            pg.gain.push_back(4.0 * pi * u / res.input_power);
        }
    }
    res.avg_pwr_gain = prad / res.input_power;
    return res;
}

}  // namespace vz::yagi
